//! The symplectic basis of `H`, the map `p : H^{⊗3} -> H^{⊕3}`, its kernel
//! `(H^{⊗3})'`, the canonical family `A` and the basis `B = S3 · A`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::curve::Genus;
use crate::error::{Error, Result};
use crate::mod2::gf2::{Echelon, F2Vec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// `x_i` or `y_i`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisSymbol {
    pub letter: Letter,
    pub index: usize,
}

impl BasisSymbol {
    pub fn x(index: usize) -> Self {
        BasisSymbol {
            letter: Letter::X,
            index,
        }
    }

    pub fn y(index: usize) -> Self {
        BasisSymbol {
            letter: Letter::Y,
            index,
        }
    }

    pub fn new(letter: Letter, index: usize) -> Self {
        BasisSymbol { letter, index }
    }

    /// Coordinate in `x_1..x_g, y_1..y_g`.
    pub fn position(self, g: Genus) -> usize {
        match self.letter {
            Letter::X => self.index - 1,
            Letter::Y => g.get() + self.index - 1,
        }
    }

    pub fn from_position(g: Genus, p: usize) -> Self {
        let n = g.get();
        if p < n {
            Self::x(p + 1)
        } else {
            Self::y(p - n + 1)
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.as_char(), self.index)
    }
}

/// `(x_i, y_j) = delta_ij = -(y_j, x_i)`, all other pairings zero.
pub fn pairing(a: BasisSymbol, b: BasisSymbol) -> i64 {
    if a.index != b.index {
        return 0;
    }
    match (a.letter, b.letter) {
        (Letter::X, Letter::Y) => 1,
        (Letter::Y, Letter::X) => -1,
        _ => 0,
    }
}

pub type Slots = [BasisSymbol; 3];

/// Integer combination of monomials `a ⊗ b ⊗ c`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElement {
    terms: BTreeMap<Slots, i64>,
}

impl TensorElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: &[(i64, Slots)]) -> Self {
        let mut t = Self::new();
        for &(c, s) in terms {
            t.add(c, s);
        }
        t
    }

    pub fn add(&mut self, coeff: i64, slots: Slots) {
        let e = self.terms.entry(slots).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&slots);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Slots, &i64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check(&self, g: Genus) -> Result<()> {
        for s in self.terms.keys().flatten() {
            g.check_form_index(s.index)
                .map_err(|_| Error::IndexOutOfRange {
                    what: "basis symbol",
                    index: s.index as i64,
                    max: g.get() as i64,
                })?;
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        TensorElement {
            terms: self.terms.iter().map(|(s, c)| (*s, -c)).collect(),
        }
    }

    /// `sigma · (h1 ⊗ h2 ⊗ h3) = h_sigma(1) ⊗ h_sigma(2) ⊗ h_sigma(3)`.
    pub fn permute(&self, sigma: Perm3) -> Self {
        let mut t = Self::new();
        for (s, &c) in &self.terms {
            t.add(c, [s[sigma.0[0]], s[sigma.0[1]], s[sigma.0[2]]]);
        }
        t
    }

    /// Dense integer coordinates over monomials, indexed
    /// `pos(a) n^2 + pos(b) n + pos(c)` with `n = 2g`.
    pub fn dense(&self, g: Genus) -> Vec<(usize, i64)> {
        self.terms
            .iter()
            .map(|(s, &c)| (monomial_index(g, s), c))
            .collect()
    }
}

pub fn monomial_index(g: Genus, s: &Slots) -> usize {
    let n = 2 * g.get();
    (s[0].position(g) * n + s[1].position(g)) * n + s[2].position(g)
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, &c)) in self.terms.iter().enumerate() {
            let body = format!("{}⊗{}⊗{}", s[0], s[1], s[2]);
            match (k, c) {
                (0, 1) => write!(f, "{body}")?,
                (0, -1) => write!(f, "-{body}")?,
                (0, c) => write!(f, "{c}{body}")?,
                (_, 1) => write!(f, " + {body}")?,
                (_, -1) => write!(f, " - {body}")?,
                (_, c) if c < 0 => write!(f, " - {}{body}", -c)?,
                (_, c) => write!(f, " + {c}{body}")?,
            }
        }
        Ok(())
    }
}

fn parse_term(src: &str, sign: i64) -> Result<(i64, Slots)> {
    let bad = |why: &str| Error::Parse(format!("{why} in term '{}'", src.trim()));
    let mut chars = src.chars().filter(|c| !c.is_whitespace()).peekable();
    let mut coeff = String::new();
    while let Some(c) = chars.next_if(|c| c.is_ascii_digit()) {
        coeff.push(c);
    }
    let coeff: i64 = if coeff.is_empty() {
        1
    } else {
        coeff.parse().map_err(|_| bad("coefficient out of range"))?
    };
    let mut slots = Vec::new();
    while let Some(c) = chars.next() {
        let letter = match c {
            'x' | 'X' => Letter::X,
            'y' | 'Y' => Letter::Y,
            _ => return Err(bad(&format!("unexpected '{c}'"))),
        };
        let mut digits = String::new();
        while let Some(d) = chars.next_if(|c| c.is_ascii_digit()) {
            digits.push(d);
        }
        let index: usize = digits.parse().map_err(|_| bad("missing index"))?;
        if index == 0 {
            return Err(bad("indices start at 1"));
        }
        slots.push(BasisSymbol::new(letter, index));
    }
    let slots: Slots = slots
        .try_into()
        .map_err(|_| bad("expected three factors"))?;
    Ok((sign * coeff, slots))
}

/// Parses the `Display` form, e.g. `x1⊗y1⊗y3 - x2⊗y2⊗y3` or
/// `2 x1*y1*y2`; `⊗`, `*` and whitespace all separate factors.
impl FromStr for TensorElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned = s.replace(['⊗', '*'], " ");
        if cleaned.trim() == "0" {
            return Ok(TensorElement::new());
        }
        let mut t = TensorElement::new();
        let mut sign = 1;
        let mut chunk = String::new();
        let mut seen = false;
        for c in cleaned.chars().chain(std::iter::once('+')) {
            if c == '+' || c == '-' {
                if chunk.trim().is_empty() {
                    if seen {
                        return Err(Error::Parse(format!("dangling sign in '{}'", s.trim())));
                    }
                } else {
                    let (w, slots) = parse_term(&chunk, sign)?;
                    t.add(w, slots);
                    chunk.clear();
                }
                seen = true;
                sign = if c == '-' { -1 } else { 1 };
            } else {
                chunk.push(c);
            }
        }
        if t.is_zero() && !s.contains(['x', 'y', 'X', 'Y']) {
            return Err(Error::Parse(format!("no terms in '{}'", s.trim())));
        }
        Ok(t)
    }
}

/// `p(a ⊗ b ⊗ c) = ((a,b)c, (b,c)a, (c,a)b)` as three length-2g vectors.
pub fn p_map(g: Genus, t: &TensorElement) -> [Vec<i64>; 3] {
    let n = 2 * g.get();
    let mut out = [vec![0; n], vec![0; n], vec![0; n]];
    for (s, &c) in t.terms() {
        let [a, b, d] = *s;
        out[0][d.position(g)] += c * pairing(a, b);
        out[1][a.position(g)] += c * pairing(b, d);
        out[2][b.position(g)] += c * pairing(d, a);
    }
    out
}

pub fn in_kernel(g: Genus, t: &TensorElement) -> bool {
    p_map(g, t).iter().all(|v| v.iter().all(|&x| x == 0))
}

/// Permutation of the three tensor slots: slot `s` of the image holds slot
/// `self.0[s]` of the source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm3(pub [usize; 3]);

impl Perm3 {
    pub const IDENTITY: Perm3 = Perm3([0, 1, 2]);

    pub fn all() -> [Perm3; 6] {
        [
            Perm3([0, 1, 2]),
            Perm3([0, 2, 1]),
            Perm3([1, 0, 2]),
            Perm3([1, 2, 0]),
            Perm3([2, 0, 1]),
            Perm3([2, 1, 0]),
        ]
    }

    pub fn sign(self) -> i64 {
        let p = self.0;
        let inversions = (p[0] > p[1]) as u32 + (p[0] > p[2]) as u32 + (p[1] > p[2]) as u32;
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{})", self.0[0] + 1, self.0[1] + 1, self.0[2] + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalKind {
    One,
    Two,
    ThreeA,
    ThreeB,
    FourA,
    FourB,
    FiveA,
    FiveB,
    SixA,
    SixB,
}

impl CanonicalKind {
    pub fn label(self) -> &'static str {
        match self {
            CanonicalKind::One => "1",
            CanonicalKind::Two => "2",
            CanonicalKind::ThreeA => "3a",
            CanonicalKind::ThreeB => "3b",
            CanonicalKind::FourA => "4a",
            CanonicalKind::FourB => "4b",
            CanonicalKind::FiveA => "5a",
            CanonicalKind::FiveB => "5b",
            CanonicalKind::SixA => "6a",
            CanonicalKind::SixB => "6b",
        }
    }
}

impl fmt::Display for CanonicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One member of `A`. `indices` are `(i, j, k)` for kind 1, `(i, k)` for
/// kinds 2 and 3, `(i)` otherwise; `letters` are the free `z` choices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalElement {
    pub kind: CanonicalKind,
    pub indices: Vec<usize>,
    pub letters: Vec<Letter>,
    pub tensor: TensorElement,
}

impl CanonicalElement {
    pub fn index_label(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        let z: String = self.letters.iter().map(|l| l.as_char()).collect();
        if z.is_empty() {
            idx.join(",")
        } else {
            format!("{};{}", idx.join(","), z)
        }
    }
}

/// The family `A`, subscripts read mod g with representatives `1..=g`.
pub fn family_a(g: Genus) -> Vec<CanonicalElement> {
    use CanonicalKind::*;
    let n = g.get();
    let m = |i: usize| (i - 1) % n + 1;
    let s = BasisSymbol::new;
    let (x, y) = (BasisSymbol::x, BasisSymbol::y);
    let letters = [Letter::X, Letter::Y];
    let mut out = Vec::new();
    let mut push = |kind, indices: Vec<usize>, ls: Vec<Letter>, terms: &[(i64, Slots)]| {
        out.push(CanonicalElement {
            kind,
            indices,
            letters: ls,
            tensor: TensorElement::from_terms(terms),
        })
    };

    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || k == i {
                    continue;
                }
                for &l0 in &letters {
                    for &l1 in &letters {
                        for &l2 in &letters {
                            push(
                                One,
                                vec![i, j, k],
                                vec![l0, l1, l2],
                                &[(1, [s(l0, i), s(l1, j), s(l2, k)])],
                            );
                        }
                    }
                }
            }
        }
    }
    for k in 1..=n {
        let k1 = m(k + 1);
        for i in 1..=n {
            if i == k || i == k1 {
                continue;
            }
            for &z in &letters {
                push(
                    Two,
                    vec![i, k],
                    vec![z],
                    &[(1, [x(i), y(i), s(z, k)]), (-1, [x(k1), y(k1), s(z, k)])],
                );
            }
        }
    }
    for i in 1..=n {
        for k in 1..=n {
            if i == k {
                continue;
            }
            for &z in &letters {
                push(ThreeA, vec![i, k], vec![z], &[(1, [x(i), x(i), s(z, k)])]);
                push(ThreeB, vec![i, k], vec![z], &[(1, [y(i), y(i), s(z, k)])]);
            }
        }
    }
    for i in 1..=n {
        let j = m(i + 1);
        push(FourA, vec![i], vec![], &[(1, [x(i), x(i), x(i)])]);
        push(FourB, vec![i], vec![], &[(1, [y(i), y(i), y(i)])]);
        push(
            FiveA,
            vec![i],
            vec![],
            &[(1, [x(j), x(i), y(j)]), (1, [y(j), x(i), x(j)])],
        );
        push(
            FiveB,
            vec![i],
            vec![],
            &[(1, [y(j), y(i), x(j)]), (1, [x(j), y(i), y(j)])],
        );
        push(
            SixA,
            vec![i],
            vec![],
            &[
                (1, [x(i), x(i), y(i)]),
                (-1, [x(i), x(j), y(j)]),
                (-1, [x(j), x(i), y(j)]),
            ],
        );
        push(
            SixB,
            vec![i],
            vec![],
            &[
                (1, [y(i), y(i), x(i)]),
                (-1, [y(i), y(j), x(j)]),
                (-1, [y(j), y(i), x(j)]),
            ],
        );
    }
    out
}

#[derive(Clone, Debug)]
pub struct BasisEntry {
    pub tensor: TensorElement,
    /// Index into the family `A` of the first element whose orbit hit this one.
    pub source: usize,
    pub perm: Perm3,
}

#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    pub genus: Genus,
    pub family: Vec<CanonicalElement>,
    pub basis: Vec<BasisEntry>,
}

pub fn expected_rank(g: Genus) -> usize {
    let n = 2 * g.get();
    n * n * n - 3 * n
}

/// `A` and `B = {sigma(a)}`. Orbits of different elements of `A` overlap
/// (e.g. kind 1 is closed under permuting its indices), so `B` is taken as a
/// set. Fails if `B` is not a basis of `(H^{⊗3})'`.
pub fn enumerate_basis(g: Genus) -> Result<CanonicalBasis> {
    let family = family_a(g);
    let mut seen = BTreeSet::new();
    let mut basis = Vec::new();
    for (idx, a) in family.iter().enumerate() {
        if !in_kernel(g, &a.tensor) {
            return Err(Error::Basis(format!(
                "{} ({}) is not in ker p",
                a.tensor, a.kind
            )));
        }
        for sigma in Perm3::all() {
            let t = a.tensor.permute(sigma);
            if seen.insert(t.clone()) {
                basis.push(BasisEntry {
                    tensor: t,
                    source: idx,
                    perm: sigma,
                });
            }
        }
    }
    let want = expected_rank(g);
    if basis.len() != want {
        return Err(Error::Basis(format!(
            "|B| = {} but rank of ker p is {want}",
            basis.len()
        )));
    }
    let rank = basis_rank(g, &basis);
    if rank != want {
        return Err(Error::Basis(format!(
            "B spans rank {rank}, expected {want}"
        )));
    }
    Ok(CanonicalBasis {
        genus: g,
        family,
        basis,
    })
}

/// Rank of `B`: over GF(2) first (full rank there already forces full rank
/// over Q), then modulo a large prime.
pub fn basis_rank(g: Genus, basis: &[BasisEntry]) -> usize {
    let n = 2 * g.get();
    let dim = n * n * n;
    let mut e = Echelon::new(dim);
    for b in basis {
        let mut v = F2Vec::zeros(dim);
        for (i, c) in b.tensor.dense(g) {
            if c.rem_euclid(2) == 1 {
                v.flip(i);
            }
        }
        e.insert(v);
    }
    if e.rank() == basis.len() {
        return e.rank();
    }
    let rows: Vec<Vec<(usize, i64)>> = basis.iter().map(|b| b.tensor.dense(g)).collect();
    rank_mod_prime(&rows, dim)
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Rank modulo `2^61 - 1` of sparse integer rows. A lower bound for the
/// rational rank, equal to it whenever it is full.
pub fn rank_mod_prime(rows: &[Vec<(usize, i64)>], ncols: usize) -> usize {
    let mut pivots: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for row in rows {
        let mut v = vec![0u64; ncols];
        for &(i, c) in row {
            v[i] = (v[i] + c.rem_euclid(PRIME as i64) as u64) % PRIME;
        }
        for (&c, p) in &pivots {
            if v[c] != 0 {
                let f = v[c];
                for (x, y) in v.iter_mut().zip(p) {
                    *x = (*x + PRIME - mulmod(f, *y)) % PRIME;
                }
            }
        }
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[c], PRIME - 2);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv);
            }
            for p in pivots.values_mut() {
                if p[c] != 0 {
                    let f = p[c];
                    for (x, y) in p.iter_mut().zip(&v) {
                        *x = (*x + PRIME - mulmod(f, *y)) % PRIME;
                    }
                }
            }
            pivots.insert(c, v);
        }
    }
    pivots.len()
}
