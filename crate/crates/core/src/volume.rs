//! Harmonic volume of elements of `(H^{⊗3})'` on `C0`.
//!
//! A term `a ⊗ b ⊗ c` is integrated along the loop Poincaré dual to `c`
//! (`x_k -> a_k`, `y_k -> b_k`) with `x_i -> alpha_i`, `y_i -> beta_i`. The
//! correcting form `eta` integrates to zero over every `e_j`, so only the
//! iterated integrals contribute.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve::{loop_word, Endpoint, Genus, LoopSymbol, PathWord};
use crate::error::{Error, Result};
use crate::iterated::{basis_iterated_matrix, bilinear};
use crate::periods::{FormRef, HarmonicCoefficients};
use crate::tensor::{
    family_a, in_kernel, pairing, BasisSymbol, CanonicalElement, CanonicalKind, Letter, Perm3,
    TensorElement,
};
use crate::tolerances::SNAP;

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Half {
    Zero,
    OneHalf,
}

impl Half {
    pub fn as_str(self) -> &'static str {
        match self {
            Half::Zero => "0",
            Half::OneHalf => "1/2",
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Half::Zero => 0.0,
            Half::OneHalf => 0.5,
        }
    }

    /// `0 -> 0`, `1/2 -> 1` in GF(2).
    pub fn as_bit(self) -> bool {
        self == Half::OneHalf
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfValue {
    pub value: Half,
    /// Representative in `[0, 1)`.
    pub raw: f64,
    /// Distance from `raw` to the snapped value mod 1.
    pub residual: f64,
}

pub fn reduce_mod1(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_integer(x: f64) -> f64 {
    let r = reduce_mod1(x);
    r.min(1.0 - r)
}

pub fn snap(raw: f64) -> Result<HalfValue> {
    snap_with(raw, SNAP)
}

pub fn snap_with(raw: f64, tolerance: f64) -> Result<HalfValue> {
    let r = reduce_mod1(raw);
    let d0 = r.min(1.0 - r);
    let dh = (r - 0.5).abs();
    let (value, residual) = if d0 <= dh {
        (Half::Zero, d0)
    } else {
        (Half::OneHalf, dh)
    };
    if !(residual <= tolerance) {
        return Err(Error::SnapFailure {
            raw: r,
            residual,
            tolerance,
        });
    }
    Ok(HalfValue {
        value,
        raw: r,
        residual,
    })
}

/// Terms of a tensor sharing the third slot, i.e. integrated along the same
/// loop.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopGroup {
    pub loop_symbol: LoopSymbol,
    pub pairs: Vec<(FormRef, FormRef, i64)>,
}

pub fn dual_loop(c: BasisSymbol) -> LoopSymbol {
    match c.letter {
        Letter::X => LoopSymbol::A(c.index),
        Letter::Y => LoopSymbol::B(c.index),
    }
}

pub fn harmonic_form(s: BasisSymbol) -> FormRef {
    match s.letter {
        Letter::X => FormRef::alpha(s.index),
        Letter::Y => FormRef::beta(s.index),
    }
}

/// Splits `t` into loop groups; requires `t` in `ker p` and every group to
/// satisfy `sum w (a, b) = 0`.
pub fn k_decompose(g: Genus, t: &TensorElement) -> Result<Vec<LoopGroup>> {
    t.check(g)?;
    if !in_kernel(g, t) {
        return Err(Error::NotInKernel(t.to_string()));
    }
    let mut groups: BTreeMap<BasisSymbol, (i64, Vec<(FormRef, FormRef, i64)>)> = BTreeMap::new();
    for (s, &w) in t.terms() {
        let e = groups.entry(s[2]).or_default();
        e.0 += w * pairing(s[0], s[1]);
        e.1.push((harmonic_form(s[0]), harmonic_form(s[1]), w));
    }
    groups
        .into_iter()
        .map(|(c, (sum, pairs))| {
            if sum != 0 {
                return Err(Error::KConditionViolated {
                    loop_name: dual_loop(c).to_string(),
                    sum,
                });
            }
            Ok(LoopGroup {
                loop_symbol: dual_loop(c),
                pairs,
            })
        })
        .collect()
}

/// Evaluates harmonic volumes with the basis iterated-integral matrix of
/// every `a_k`, `b_k` cached.
#[derive(Clone, Debug)]
pub struct VolumeEngine {
    coeffs: HarmonicCoefficients,
    matrices: BTreeMap<LoopSymbol, DMatrix<C>>,
    conjugator: Option<PathWord>,
    snap_tolerance: f64,
}

impl VolumeEngine {
    pub fn new(g: Genus) -> Result<Self> {
        Self::build(g, None)
    }

    /// Evaluates along `c γ c^-1` instead of `γ`; `c` must end at `Q0`.
    /// Moves the base point without changing the harmonic volume.
    pub fn with_conjugator(g: Genus, c: PathWord) -> Result<Self> {
        if !c.is_composable() || c.letters().last().is_some_and(|l| l.end() != Endpoint::Q0) {
            return Err(Error::Config(format!(
                "conjugator {c} is not a path ending at Q0"
            )));
        }
        Self::build(g, Some(c))
    }

    fn build(g: Genus, conjugator: Option<PathWord>) -> Result<Self> {
        let coeffs = HarmonicCoefficients::for_genus(g)?;
        let mut matrices = BTreeMap::new();
        for k in 1..=g.get() {
            for s in [LoopSymbol::A(k), LoopSymbol::B(k)] {
                let mut w = loop_word(g, s)?;
                if let Some(c) = &conjugator {
                    w = w.conjugate_by(c);
                }
                matrices.insert(s, basis_iterated_matrix(g, &w)?);
            }
        }
        Ok(VolumeEngine {
            coeffs,
            matrices,
            conjugator,
            snap_tolerance: SNAP,
        })
    }

    pub fn with_snap_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance < 0.25) {
            return Err(Error::ParameterOutOfRange(tolerance));
        }
        self.snap_tolerance = tolerance;
        Ok(self)
    }

    pub fn snap_tolerance(&self) -> f64 {
        self.snap_tolerance
    }

    pub fn genus(&self) -> Genus {
        self.coeffs.genus
    }

    pub fn coefficients(&self) -> &HarmonicCoefficients {
        &self.coeffs
    }

    pub fn conjugator(&self) -> Option<&PathWord> {
        self.conjugator.as_ref()
    }

    /// Unreduced sum of iterated integrals; its imaginary part is rounding.
    pub fn volume_complex(&self, t: &TensorElement) -> Result<C> {
        let groups = k_decompose(self.genus(), t)?;
        let mut total = C::new(0.0, 0.0);
        for grp in groups {
            let m = &self.matrices[&grp.loop_symbol];
            for (f1, f2, w) in grp.pairs {
                total += bilinear(m, &self.coeffs.expand(f1)?, &self.coeffs.expand(f2)?) * w as f64;
            }
        }
        Ok(total)
    }

    /// Real value reduced to `[0, 1)`.
    pub fn volume_real(&self, t: &TensorElement) -> Result<f64> {
        Ok(reduce_mod1(self.volume_complex(t)?.re))
    }

    pub fn volume(&self, t: &TensorElement) -> Result<HalfValue> {
        snap_with(self.volume_complex(t)?.re, self.snap_tolerance)
    }

    /// Largest `|I(sigma t) + sgn(sigma) I(t)|` mod 1 over `S3`.
    pub fn s3_defect(&self, t: &TensorElement) -> Result<f64> {
        let base = self.volume_complex(t)?.re;
        let mut worst: f64 = 0.0;
        for sigma in Perm3::all() {
            let v = self.volume_complex(&t.permute(sigma))?.re;
            worst = worst.max(dist_to_integer(v + sigma.sign() as f64 * base));
        }
        Ok(worst)
    }
}

/// Value of the harmonic volume on `A`: kind 6 gives 1/2, kind 2 gives 1/2
/// exactly when `i < k`, `2 <= k <= g-1` and `z_k = y_k`, all else 0.
pub fn expected_value(g: Genus, e: &CanonicalElement) -> Half {
    match e.kind {
        CanonicalKind::SixA | CanonicalKind::SixB => Half::OneHalf,
        CanonicalKind::Two => {
            let (i, k) = (e.indices[0], e.indices[1]);
            if i < k && 2 <= k && k < g.get() && e.letters[0] == Letter::Y {
                Half::OneHalf
            } else {
                Half::Zero
            }
        }
        _ => Half::Zero,
    }
}

#[derive(Clone, Debug)]
pub struct VolumeRow {
    pub element: CanonicalElement,
    pub value: HalfValue,
    pub imag: f64,
    pub expected: Half,
}

impl VolumeRow {
    pub fn matches(&self) -> bool {
        self.value.value == self.expected
    }
}

/// Every element of `A` evaluated through the engine, in enumeration order.
pub fn volume_table(engine: &VolumeEngine) -> Result<Vec<VolumeRow>> {
    let g = engine.genus();
    family_a(g)
        .into_par_iter()
        .map(|element| {
            let v = engine.volume_complex(&element.tensor)?;
            Ok(VolumeRow {
                value: snap_with(v.re, engine.snap_tolerance)?,
                imag: v.im,
                expected: expected_value(g, &element),
                element,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::PathLetter;
    use crate::tensor::BasisSymbol as B;
    use crate::tolerances::S3_EQUIVARIANCE;

    #[test]
    fn snapping() {
        assert_eq!(snap(3.00001).unwrap().value, Half::Zero);
        assert_eq!(snap(-0.49999).unwrap().value, Half::OneHalf);
        assert_eq!(snap(0.99999).unwrap().value, Half::Zero);
        assert!(matches!(snap(0.25), Err(Error::SnapFailure { .. })));
    }

    #[test]
    fn table_g3_matches_expected() {
        let g = Genus::new(3).unwrap();
        let e = VolumeEngine::new(g).unwrap();
        let rows = volume_table(&e).unwrap();
        assert_eq!(rows.len(), 96);
        for r in &rows {
            assert!(
                r.matches(),
                "{} {} -> {}",
                r.element.kind,
                r.element.index_label(),
                r.value.raw
            );
            assert!(r.value.residual < 1e-10);
        }
    }

    #[test]
    fn specific_branches() {
        let g6 = Genus::new(6).unwrap();
        let e6 = VolumeEngine::new(g6).unwrap();
        let t = TensorElement::from_terms(&[
            (1, [B::x(5), B::y(5), B::y(3)]),
            (-1, [B::x(4), B::y(4), B::y(3)]),
        ]);
        assert_eq!(e6.volume(&t).unwrap().value, Half::Zero);
        let t = TensorElement::from_terms(&[
            (1, [B::x(2), B::y(2), B::y(3)]),
            (-1, [B::x(4), B::y(4), B::y(3)]),
        ]);
        assert_eq!(e6.volume(&t).unwrap().value, Half::OneHalf);
        let g5 = Genus::new(5).unwrap();
        let e5 = VolumeEngine::new(g5).unwrap();
        let t = TensorElement::from_terms(&[
            (1, [B::x(2), B::y(2), B::y(5)]),
            (-1, [B::x(1), B::y(1), B::y(5)]),
        ]);
        assert_eq!(e5.volume(&t).unwrap().value, Half::Zero);
    }

    #[test]
    fn rejects_outside_kernel() {
        let g = Genus::new(3).unwrap();
        let e = VolumeEngine::new(g).unwrap();
        let t = TensorElement::from_terms(&[(1, [B::x(1), B::y(1), B::x(2)])]);
        assert!(matches!(e.volume(&t), Err(Error::NotInKernel(_))));
    }

    #[test]
    fn rejects_k_violation() {
        // In ker p but the two terms sit on different loops.
        let g = Genus::new(3).unwrap();
        let t = TensorElement::from_terms(&[
            (1, [B::x(1), B::y(1), B::x(2)]),
            (1, [B::x(2), B::y(2), B::x(1)]),
            (-1, [B::x(1), B::x(2), B::y(1)]),
        ]);
        let r = k_decompose(g, &t);
        assert!(matches!(
            r,
            Err(Error::NotInKernel(_)) | Err(Error::KConditionViolated { .. })
        ));
    }

    #[test]
    fn s3_equivariance_g4() {
        let g = Genus::new(4).unwrap();
        let e = VolumeEngine::new(g).unwrap();
        for a in family_a(g) {
            assert!(e.s3_defect(&a.tensor).unwrap() < S3_EQUIVARIANCE);
        }
    }

    #[test]
    fn conjugated_base_point() {
        let g = Genus::new(3).unwrap();
        let plain = VolumeEngine::new(g).unwrap();
        let c = PathWord::new(vec![PathLetter::plain(2), PathLetter::involuted(5)]);
        let moved = VolumeEngine::with_conjugator(g, c).unwrap();
        for a in family_a(g) {
            let d = plain.volume_complex(&a.tensor).unwrap().re
                - moved.volume_complex(&a.tensor).unwrap().re;
            assert!(dist_to_integer(d) < 1e-10);
        }
        assert!(
            VolumeEngine::with_conjugator(g, PathWord::new(vec![PathLetter::plain(0)])).is_err()
        );
    }
}
