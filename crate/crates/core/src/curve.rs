//! The curve `w^2 = z^(2g+2) - 1`, its half-loops `e_j` and the loop words
//! built from them.
//!
//! `e_j` (0-based, `0 <= j <= 2g+1`) runs from `Q0 = (0, i)` along the ray
//! through `zeta^j` to the branch point `P_j = (zeta^j, 0)` and back to
//! `Q1 = (0, -i)` on the other sheet. The hyperelliptic involution flips the
//! sign of `w`, and `iota(e_j)` is exactly `e_j` traversed backwards.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::zeta_pow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genus(usize);

impl Genus {
    pub const MIN: usize = 3;
    pub const MAX: usize = 12;

    pub fn new(g: i64) -> Result<Self> {
        if g < Self::MIN as i64 || g > Self::MAX as i64 {
            return Err(Error::GenusOutOfRange(g));
        }
        Ok(Genus(g as usize))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Number of branch points, 2g+2.
    pub fn branch_count(self) -> usize {
        2 * self.0 + 2
    }

    pub fn check_form_index(self, i: usize) -> Result<()> {
        if i == 0 || i > self.0 {
            return Err(Error::IndexOutOfRange {
                what: "form",
                index: i as i64,
                max: self.0 as i64,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Plain,
    Involuted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Forward,
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Q0,
    Q1,
}

impl Endpoint {
    pub fn point(self) -> CurvePoint {
        match self {
            Endpoint::Q0 => CurvePoint {
                z: Complex64::new(0.0, 0.0),
                w: Complex64::new(0.0, 1.0),
            },
            Endpoint::Q1 => CurvePoint {
                z: Complex64::new(0.0, 0.0),
                w: Complex64::new(0.0, -1.0),
            },
        }
    }
}

/// One of `e_j`, `iota(e_j)` or their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathLetter {
    pub index: usize,
    pub flavor: Flavor,
    pub orientation: Orientation,
}

impl PathLetter {
    pub fn plain(index: usize) -> Self {
        PathLetter {
            index,
            flavor: Flavor::Plain,
            orientation: Orientation::Forward,
        }
    }

    pub fn involuted(index: usize) -> Self {
        PathLetter {
            index,
            flavor: Flavor::Involuted,
            orientation: Orientation::Forward,
        }
    }

    pub fn inverse(self) -> Self {
        let orientation = match self.orientation {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        };
        PathLetter {
            orientation,
            ..self
        }
    }

    /// +1 if the letter traces `e_j` in its own direction, -1 if it traces
    /// `e_j` backwards. Involution and reversal each flip the direction.
    pub fn direction(self) -> i32 {
        match (self.flavor, self.orientation) {
            (Flavor::Plain, Orientation::Forward) | (Flavor::Involuted, Orientation::Reverse) => 1,
            _ => -1,
        }
    }

    pub fn start(self) -> Endpoint {
        if self.direction() > 0 {
            Endpoint::Q0
        } else {
            Endpoint::Q1
        }
    }

    pub fn end(self) -> Endpoint {
        if self.direction() > 0 {
            Endpoint::Q1
        } else {
            Endpoint::Q0
        }
    }

    fn check(self, g: Genus) -> Result<()> {
        if self.index >= g.branch_count() {
            return Err(Error::IndexOutOfRange {
                what: "path letter",
                index: self.index as i64,
                max: g.branch_count() as i64 - 1,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PathLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.flavor {
            Flavor::Plain => format!("e{}", self.index),
            Flavor::Involuted => format!("ie{}", self.index),
        };
        match self.orientation {
            Orientation::Forward => write!(f, "{base}"),
            Orientation::Reverse => write!(f, "{base}^-1"),
        }
    }
}

/// A concatenation of letters, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PathWord {
    letters: Vec<PathLetter>,
}

impl PathWord {
    pub fn new(letters: Vec<PathLetter>) -> Self {
        PathWord { letters }
    }

    pub fn letters(&self) -> &[PathLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_composable(&self) -> bool {
        self.letters.windows(2).all(|w| w[0].end() == w[1].start())
    }

    pub fn is_loop_at_q0(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => {
                a.start() == Endpoint::Q0 && b.end() == Endpoint::Q0 && self.is_composable()
            }
            _ => true,
        }
    }

    pub fn inverse(&self) -> PathWord {
        PathWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &PathWord) -> PathWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        PathWord { letters }
    }

    /// `c * self * c^-1`.
    pub fn conjugate_by(&self, c: &PathWord) -> PathWord {
        c.concat(self).concat(&c.inverse())
    }

    /// Inserts `other` before position `at`.
    pub fn insert(&self, at: usize, other: &PathWord) -> PathWord {
        let mut letters = self.letters[..at].to_vec();
        letters.extend_from_slice(&other.letters);
        letters.extend_from_slice(&self.letters[at..]);
        PathWord { letters }
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `A(k)` is `a_k`, `B(k)` is `b_k`, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopSymbol {
    A(usize),
    B(usize),
}

impl LoopSymbol {
    pub fn index(self) -> usize {
        match self {
            LoopSymbol::A(k) | LoopSymbol::B(k) => k,
        }
    }
}

impl fmt::Display for LoopSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopSymbol::A(k) => write!(f, "a{k}"),
            LoopSymbol::B(k) => write!(f, "b{k}"),
        }
    }
}

/// `a_k = e_{2k-1} iota(e_{2k})` and
/// `b_k = e_{2k-1} iota(e_{2k-2}) ... e_1 iota(e_0)`.
pub fn loop_word(g: Genus, symbol: LoopSymbol) -> Result<PathWord> {
    let k = symbol.index();
    if k == 0 || k > g.get() {
        return Err(Error::IndexOutOfRange {
            what: "loop",
            index: k as i64,
            max: g.get() as i64,
        });
    }
    let letters = match symbol {
        LoopSymbol::A(k) => vec![PathLetter::plain(2 * k - 1), PathLetter::involuted(2 * k)],
        LoopSymbol::B(k) => (1..=k)
            .rev()
            .flat_map(|l| {
                [
                    PathLetter::plain(2 * l - 1),
                    PathLetter::involuted(2 * l - 2),
                ]
            })
            .collect(),
    };
    Ok(PathWord::new(letters))
}

pub fn loop_words(g: Genus) -> BTreeMap<LoopSymbol, PathWord> {
    let mut out = BTreeMap::new();
    for k in 1..=g.get() {
        for s in [LoopSymbol::A(k), LoopSymbol::B(k)] {
            out.insert(s, loop_word(g, s).expect("index in range"));
        }
    }
    out
}

/// `e_0 iota(e_1) e_2 iota(e_3) ... e_{2g} iota(e_{2g+1})`, null-homotopic.
pub fn relator_word(g: Genus) -> PathWord {
    PathWord::new(
        (0..=g.get())
            .flat_map(|m| [PathLetter::plain(2 * m), PathLetter::involuted(2 * m + 1)])
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl CurvePoint {
    pub fn residual(&self, g: Genus) -> f64 {
        (self.w * self.w - (self.z.powu(g.branch_count() as u32) - 1.0)).norm()
    }
}

/// Which half of a letter, in the letter's own time parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Half {
    /// `t` in `[0, 1/2]`, approaching the branch point.
    Incoming,
    /// `t` in `[1/2, 1]`, leaving the branch point.
    Outgoing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSample {
    pub point: CurvePoint,
    pub dz_dt: Complex64,
}

/// Samples a letter at `t = 1/2 - gap` (incoming) or `t = 1/2 + gap`
/// (outgoing), with `gap` in `[0, 1/2]` given exactly so that `w` keeps full
/// relative accuracy next to the branch point.
pub fn path_sample(g: Genus, letter: PathLetter, half: Half, gap: f64) -> PathSample {
    let n = g.branch_count() as f64;
    let gap = gap.clamp(0.0, 0.5);
    // Reversal swaps the halves; involution flips the sheet.
    let half_on_e = match (letter.orientation, half) {
        (Orientation::Forward, h) => h,
        (Orientation::Reverse, Half::Incoming) => Half::Outgoing,
        (Orientation::Reverse, Half::Outgoing) => Half::Incoming,
    };
    // s = 1 - 2 gap, and 1 - s^N = -expm1(N ln(1 - 2 gap)).
    let s = 1.0 - 2.0 * gap;
    let radicand = -(n * (-2.0 * gap).ln_1p()).exp_m1();
    let root = radicand.max(0.0).sqrt();
    let ray = zeta_pow(g, letter.index as i64);
    let (w_sign, dz_sign) = match half_on_e {
        Half::Incoming => (1.0, 2.0),
        Half::Outgoing => (-1.0, -2.0),
    };
    let w_sign = match letter.flavor {
        Flavor::Plain => w_sign,
        Flavor::Involuted => -w_sign,
    };
    let dz_sign = match letter.orientation {
        Orientation::Forward => dz_sign,
        Orientation::Reverse => -dz_sign,
    };
    PathSample {
        point: CurvePoint {
            z: ray * s,
            w: Complex64::new(0.0, w_sign * root),
        },
        dz_dt: ray * dz_sign,
    }
}

/// Point of the letter at time `t` in `[0, 1]`.
pub fn path_point(g: Genus, letter: PathLetter, t: f64) -> Result<CurvePoint> {
    if !(0.0..=1.0).contains(&t) || t.is_nan() {
        return Err(Error::ParameterOutOfRange(t));
    }
    letter.check(g)?;
    let (half, gap) = if t <= 0.5 {
        (Half::Incoming, 0.5 - t)
    } else {
        (Half::Outgoing, t - 0.5)
    };
    Ok(path_sample(g, letter, half, gap).point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::CURVE_RESIDUAL;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn genus_range() {
        assert!(Genus::new(2).is_err());
        assert!(Genus::new(13).is_err());
        assert_eq!(Genus::new(3).unwrap().branch_count(), 8);
    }

    #[test]
    fn endpoints_and_branch_point() {
        let g = Genus::new(4).unwrap();
        for j in 0..g.branch_count() {
            let e = PathLetter::plain(j);
            assert!(close(
                path_point(g, e, 0.0).unwrap().w,
                Complex64::new(0.0, 1.0)
            ));
            assert!(close(
                path_point(g, e, 1.0).unwrap().w,
                Complex64::new(0.0, -1.0)
            ));
            let p = path_point(g, e, 0.5).unwrap();
            assert!(close(p.z, zeta_pow(g, j as i64)));
            assert!(p.w.norm() < 1e-14);
        }
    }

    #[test]
    fn points_lie_on_curve() {
        for gi in 3..=12 {
            let g = Genus::new(gi).unwrap();
            for j in 0..g.branch_count() {
                for step in 0..=40 {
                    let t = step as f64 / 40.0;
                    for letter in [PathLetter::plain(j), PathLetter::involuted(j).inverse()] {
                        let p = path_point(g, letter, t).unwrap();
                        assert!(p.residual(g) < CURVE_RESIDUAL, "g={gi} j={j} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn involution_is_reversal() {
        let g = Genus::new(3).unwrap();
        for j in 0..8 {
            for step in 0..=20 {
                let t = step as f64 / 20.0;
                let a = path_point(g, PathLetter::involuted(j), t).unwrap();
                let b = path_point(g, PathLetter::plain(j).inverse(), t).unwrap();
                assert!(close(a.z, b.z) && close(a.w, b.w));
            }
        }
    }

    #[test]
    fn parameter_out_of_range() {
        let g = Genus::new(3).unwrap();
        assert_eq!(
            path_point(g, PathLetter::plain(0), 1.5),
            Err(Error::ParameterOutOfRange(1.5))
        );
        assert!(path_point(g, PathLetter::plain(8), 0.2).is_err());
    }

    #[test]
    fn loop_words_are_closed_at_q0() {
        let g = Genus::new(5).unwrap();
        for (_, w) in loop_words(g) {
            assert!(w.is_loop_at_q0());
        }
        assert!(relator_word(g).is_loop_at_q0());
        assert_eq!(loop_word(g, LoopSymbol::B(3)).unwrap().len(), 6);
        assert_eq!(
            loop_word(g, LoopSymbol::B(2)).unwrap().to_string(),
            "e3 ie2 e1 ie0"
        );
        assert!(loop_word(g, LoopSymbol::A(6)).is_err());
    }
}
