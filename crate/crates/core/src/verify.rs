//! Every cross-check of the two routes as a named pass/fail result with the
//! largest error seen.
//!
//! Exact checks (counts, dimensions, table agreement) report the number of
//! discrepancies as `max_abs_err` with tolerance 0.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{loop_word, relator_word, Genus, LoopSymbol, PathLetter, PathWord};
use crate::error::Result;
use crate::iterated::{
    basis_iterated_matrix, bilinear, harmonic_pair_closed, harmonic_pair_iterated,
    loop_iterated_closed,
};
use crate::kernel::zeta_pow;
use crate::mod2::connecting::connecting_class;
use crate::mod2::functionals::{
    analytic_matches_psi, invariant_functionals, psi_vector, second_proof_table, ActingGroup,
    ModuleKind,
};
use crate::mod2::presentation::{dual_homology_presentation, presentation_h1};
use crate::periods::{
    omega_a_inverse_closed, z_cotangent, z_schindler, FormKind, FormRef, HarmonicCoefficients,
    PeriodMatrices,
};
use crate::quadrature::{quad_iterated_many, quad_periods, QuadConfig};
use crate::tensor::{
    basis_rank, enumerate_basis, expected_rank, in_kernel, pairing, BasisSymbol, CanonicalKind,
};
use crate::tolerances::*;
use crate::volume::{volume_table, Half, VolumeEngine};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_abs_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn measured(name: impl Into<String>, err: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            max_abs_err: err,
            tolerance,
            pass: err.is_finite() && err <= tolerance,
        }
    }

    /// Exact check: `discrepancies` must be 0.
    pub fn exact(name: impl Into<String>, discrepancies: usize) -> Self {
        Self::measured(name, discrepancies as f64, 0.0)
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::exact(name, usize::from(!ok))
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} (max err {:.3e}, tol {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.max_abs_err,
            self.tolerance
        )
    }
}

/// The twelve acceptance criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    PeriodsVsQuadrature,
    PeriodMatrix,
    Duality,
    IteratedIntegrals,
    HarmonicFormulas,
    VolumeTable,
    S3Equivariance,
    RelatorVanishing,
    Basis,
    Mod2Dimensions,
    CrossRoute,
    PresentationCohomology,
}

impl Criterion {
    pub const ALL: [Criterion; 12] = [
        Criterion::PeriodsVsQuadrature,
        Criterion::PeriodMatrix,
        Criterion::Duality,
        Criterion::IteratedIntegrals,
        Criterion::HarmonicFormulas,
        Criterion::VolumeTable,
        Criterion::S3Equivariance,
        Criterion::RelatorVanishing,
        Criterion::Basis,
        Criterion::Mod2Dimensions,
        Criterion::CrossRoute,
        Criterion::PresentationCohomology,
    ];

    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap() + 1
    }

    pub fn label(self) -> &'static str {
        match self {
            Criterion::PeriodsVsQuadrature => "periods vs quadrature",
            Criterion::PeriodMatrix => "period matrix",
            Criterion::Duality => "duality of alpha/beta",
            Criterion::IteratedIntegrals => "iterated integrals",
            Criterion::HarmonicFormulas => "harmonic iterated integrals",
            Criterion::VolumeTable => "volume table",
            Criterion::S3Equivariance => "S3 equivariance",
            Criterion::RelatorVanishing => "relator vanishing",
            Criterion::Basis => "basis of (H^3)'",
            Criterion::Mod2Dimensions => "mod-2 invariant dimensions",
            Criterion::CrossRoute => "analytic vs mod-2 route",
            Criterion::PresentationCohomology => "presentation H^1 and connecting class",
        }
    }

    /// Genera over which the criterion is stated.
    pub fn default_genera(self) -> Vec<usize> {
        match self {
            Criterion::PeriodsVsQuadrature
            | Criterion::Duality
            | Criterion::IteratedIntegrals
            | Criterion::HarmonicFormulas => vec![3, 4, 5],
            Criterion::PeriodMatrix => (3..=8).collect(),
            Criterion::VolumeTable | Criterion::CrossRoute => (3..=6).collect(),
            Criterion::S3Equivariance
            | Criterion::RelatorVanishing
            | Criterion::PresentationCohomology => vec![3],
            Criterion::Basis | Criterion::Mod2Dimensions => vec![3, 4],
        }
    }

    /// Whether the criterion needs the `(2g)^3`-dimensional GF(2) cube.
    pub fn needs_cube(self) -> bool {
        matches!(
            self,
            Criterion::Mod2Dimensions | Criterion::CrossRoute | Criterion::PresentationCohomology
        )
    }

    pub fn run(self, genera: &[Genus], cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        for &g in genera {
            let tag = |name: &str| format!("{name} [g={g}]");
            let checks = match self {
                Criterion::PeriodsVsQuadrature => check_periods_vs_quadrature(g, &cfg.quad)?,
                Criterion::PeriodMatrix => check_period_matrix(g)?,
                Criterion::Duality => check_duality(g, &cfg.quad)?,
                Criterion::IteratedIntegrals => check_iterated(g, &cfg.quad)?,
                Criterion::HarmonicFormulas => check_harmonic_formulas(g)?,
                Criterion::VolumeTable => check_volume_table(g, cfg.snap)?,
                Criterion::S3Equivariance => check_s3(g)?,
                Criterion::RelatorVanishing => check_relator(g, &cfg.quad)?,
                Criterion::Basis => check_basis(g)?,
                Criterion::Mod2Dimensions => check_mod2_dimensions(g)?,
                Criterion::CrossRoute => check_cross_route(g)?,
                Criterion::PresentationCohomology => check_presentation(g)?,
            };
            out.extend(checks.into_iter().map(|mut c| {
                c.name = tag(&c.name);
                c
            }));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub quad: QuadConfig,
    pub snap: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            quad: QuadConfig::default(),
            snap: SNAP,
        }
    }
}

/// Every criterion at a single genus. Criteria that need the GF(2) cube are
/// skipped above the cube limit.
pub fn verify_genus(g: Genus, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for c in Criterion::ALL {
        if c.needs_cube() && g.get() > MOD2_CUBE_MAX_GENUS {
            continue;
        }
        out.extend(c.run(&[g], cfg)?);
    }
    Ok(out)
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn check_periods_vs_quadrature(g: Genus, cfg: &QuadConfig) -> Result<Vec<CheckResult>> {
    let forms: Vec<FormRef> = FormRef::basis(g);
    let n = g.get() as i64;
    let errs: Result<Vec<f64>> = (0..g.branch_count())
        .into_par_iter()
        .map(|j| {
            let q = quad_periods(g, &forms, &PathWord::new(vec![PathLetter::plain(j)]), cfg)?;
            let mut worst: f64 = 0.0;
            for (f, v) in forms.iter().zip(&q.values) {
                let i = f.index as i64;
                let want = match f.kind {
                    FormKind::OmegaPrimeConj => zeta_pow(g, -(i * j as i64)),
                    _ => zeta_pow(g, i * j as i64),
                };
                worst = worst.max((v - want).norm() / want.norm());
            }
            debug_assert!(forms.len() as i64 == 2 * n);
            Ok(worst)
        })
        .collect();
    let err = errs?.into_iter().fold(0.0, f64::max);
    Ok(vec![CheckResult::measured(
        "segment periods, quadrature vs closed form (relative)",
        err,
        QUAD_PERIOD_RELATIVE,
    )])
}

pub fn check_period_matrix(g: Genus) -> Result<Vec<CheckResult>> {
    let p = PeriodMatrices::new(g)?;
    let direct = omega_a_inverse_closed(g) * &p.omega_b;
    let s = z_schindler(g);
    let c = z_cotangent(g);
    let routes = max_abs(&(&direct - &s))
        .max(max_abs(&(&direct - &c)))
        .max(max_abs(&(&s - &c)));
    Ok(vec![
        CheckResult::measured("Z symmetric", p.symmetry_error(), PERIOD_MATRIX),
        CheckResult::measured("Z pure imaginary", p.real_part_max(), PERIOD_MATRIX),
        CheckResult::flag("Im Z positive definite", p.im_z_positive_definite()),
        CheckResult::measured("Z by three routes", routes, PERIOD_MATRIX_ROUTES),
    ])
}

pub fn check_duality(g: Genus, cfg: &QuadConfig) -> Result<Vec<CheckResult>> {
    let h = HarmonicCoefficients::for_genus(g)?;
    let basis = FormRef::basis(g);
    let n = g.get();
    let loops: Vec<LoopSymbol> = (1..=n)
        .flat_map(|k| [LoopSymbol::A(k), LoopSymbol::B(k)])
        .collect();
    let errs: Result<Vec<f64>> = loops
        .par_iter()
        .map(|&s| {
            let q = quad_periods(g, &basis, &loop_word(g, s)?, cfg)?;
            let mut worst: f64 = 0.0;
            for i in 1..=n {
                for (form, want) in [
                    (
                        FormRef::alpha(i),
                        matches!(s, LoopSymbol::B(k) if k == i) as i32 as f64,
                    ),
                    (
                        FormRef::beta(i),
                        -(matches!(s, LoopSymbol::A(k) if k == i) as i32 as f64),
                    ),
                ] {
                    let c = h.expand(form)?;
                    let v: C = c.iter().zip(&q.values).map(|(a, b)| a * b).sum();
                    worst = worst.max((v - want).norm());
                }
            }
            Ok(worst)
        })
        .collect();
    let err = errs?.into_iter().fold(0.0, f64::max);
    Ok(vec![CheckResult::measured(
        "periods of alpha/beta by quadrature",
        err,
        DUALITY_NUMERIC,
    )])
}

pub fn check_iterated(g: Genus, cfg: &QuadConfig) -> Result<Vec<CheckResult>> {
    let basis = FormRef::basis(g);
    let m = basis.len();
    let loops: Vec<LoopSymbol> = (1..=g.get())
        .flat_map(|k| [LoopSymbol::A(k), LoopSymbol::B(k)])
        .collect();
    let errs: Result<Vec<(f64, f64)>> = loops
        .par_iter()
        .map(|&s| {
            let word = loop_word(g, s)?;
            let engine = basis_iterated_matrix(g, &word)?;
            let q = quad_iterated_many(g, &basis, &basis, &word, cfg)?;
            let (mut ef, mut eo): (f64, f64) = (0.0, 0.0);
            for a in 0..m {
                for b in 0..m {
                    let closed = loop_iterated_closed(g, basis[a], basis[b], s)?;
                    ef = ef.max((engine[(a, b)] - closed).norm());
                    eo = eo.max((engine[(a, b)] - q.values[a * m + b]).norm());
                }
            }
            Ok((ef, eo))
        })
        .collect();
    let errs = errs?;
    Ok(vec![
        CheckResult::measured(
            "loop iterated integrals, engine vs closed form",
            errs.iter().map(|e| e.0).fold(0.0, f64::max),
            ENGINE_VS_FORMULA,
        ),
        CheckResult::measured(
            "loop iterated integrals, engine vs quadrature",
            errs.iter().map(|e| e.1).fold(0.0, f64::max),
            QUAD_ITERATED,
        ),
    ])
}

pub fn check_harmonic_formulas(g: Genus) -> Result<Vec<CheckResult>> {
    let h = HarmonicCoefficients::for_genus(g)?;
    let n = g.get();
    let (mut nonzero, mut zero): (f64, f64) = (0.0, 0.0);
    for k in 1..=n {
        for i in 1..=n {
            for j in 1..=n {
                for (f1, f2) in [
                    (FormRef::alpha(i), FormRef::alpha(j)),
                    (FormRef::beta(i), FormRef::beta(j)),
                ] {
                    for s in [LoopSymbol::A(k), LoopSymbol::B(k)] {
                        let engine = harmonic_pair_iterated(&h, f1, f2, s)?;
                        let closed = harmonic_pair_closed(g, f1, f2, s)?;
                        let err = (engine - closed).norm();
                        let vanishing = matches!(
                            (f1.kind, s),
                            (FormKind::Alpha, LoopSymbol::A(_))
                                | (FormKind::Beta, LoopSymbol::B(_))
                        );
                        if vanishing {
                            zero = zero.max(err);
                        } else {
                            nonzero = nonzero.max(err);
                        }
                    }
                }
            }
        }
    }
    Ok(vec![
        CheckResult::measured(
            "beta beta on a_k and alpha alpha on b_k",
            nonzero,
            ENGINE_VS_FORMULA,
        ),
        CheckResult::measured(
            "alpha alpha on a_k and beta beta on b_k vanish",
            zero,
            ENGINE_VS_FORMULA,
        ),
    ])
}

pub fn check_volume_table(g: Genus, snap: f64) -> Result<Vec<CheckResult>> {
    let engine = VolumeEngine::new(g)?.with_snap_tolerance(snap)?;
    let rows = volume_table(&engine)?;
    let residual = rows.iter().map(|r| r.value.residual).fold(0.0, f64::max);
    let mismatches = rows.iter().filter(|r| !r.matches()).count();
    Ok(vec![
        CheckResult::measured("volume residual from {0, 1/2}", residual, snap),
        CheckResult::exact(
            "volume table against expected values (mismatches)",
            mismatches,
        ),
    ])
}

pub fn check_s3(g: Genus) -> Result<Vec<CheckResult>> {
    let engine = VolumeEngine::new(g)?;
    let family = crate::tensor::family_a(g);
    let defects: Result<Vec<f64>> = family
        .par_iter()
        .map(|e| engine.s3_defect(&e.tensor))
        .collect();
    let err = defects?.into_iter().fold(0.0, f64::max);
    Ok(vec![CheckResult::measured(
        "I(sigma t) = sgn(sigma) I(t) mod 1",
        err,
        S3_EQUIVARIANCE,
    )])
}

/// Over the relator word every combination with zero total pairing must
/// vanish; the pairs `(s, t)` are made K-valid by subtracting
/// `(s, t) (x_1, y_1)`.
pub fn check_relator(g: Genus, cfg: &QuadConfig) -> Result<Vec<CheckResult>> {
    let h = HarmonicCoefficients::for_genus(g)?;
    let word = relator_word(g);
    let basis = FormRef::basis(g);
    let m = basis.len();
    let closed = basis_iterated_matrix(g, &word)?;
    let q = quad_iterated_many(g, &basis, &basis, &word, cfg)?;
    let oracle = DMatrix::from_fn(m, m, |a, b| q.values[a * m + b]);
    let symbols: Vec<BasisSymbol> = (0..m).map(|p| BasisSymbol::from_position(g, p)).collect();
    let expansions: Vec<Vec<C>> = symbols
        .iter()
        .map(|&s| h.expand(crate::volume::harmonic_form(s)))
        .collect::<Result<_>>()?;
    let value =
        |mat: &DMatrix<C>, s: usize, t: usize| bilinear(mat, &expansions[s], &expansions[t]);
    let x1 = BasisSymbol::x(1).position(g);
    let y1 = BasisSymbol::y(1).position(g);
    let (mut ec, mut eo): (f64, f64) = (0.0, 0.0);
    for s in 0..m {
        for t in 0..m {
            let w = pairing(symbols[s], symbols[t]) as f64;
            ec = ec.max((value(&closed, s, t) - w * value(&closed, x1, y1)).norm());
            eo = eo.max((value(&oracle, s, t) - w * value(&oracle, x1, y1)).norm());
        }
    }
    Ok(vec![
        CheckResult::measured(
            "K-valid pairs over the relator, closed form",
            ec,
            RELATOR_CLOSED,
        ),
        CheckResult::measured(
            "K-valid pairs over the relator, quadrature",
            eo,
            QUAD_ITERATED,
        ),
    ])
}

pub fn check_basis(g: Genus) -> Result<Vec<CheckResult>> {
    let b = enumerate_basis(g)?;
    let want = expected_rank(g);
    let outside = b.basis.iter().filter(|e| !in_kernel(g, &e.tensor)).count();
    Ok(vec![
        CheckResult::exact("|B| = (2g)^3 - 6g", b.basis.len().abs_diff(want)),
        CheckResult::exact("rank of B", basis_rank(g, &b.basis).abs_diff(want)),
        CheckResult::exact("p(b) = 0 for b in B (violations)", outside),
    ])
}

pub fn check_mod2_dimensions(g: Genus) -> Result<Vec<CheckResult>> {
    let h = invariant_functionals(g, ActingGroup::Sym2gPlus1, ModuleKind::H)?;
    let cube = invariant_functionals(g, ActingGroup::Sym2gPlus1, ModuleKind::Cube)?;
    let full = invariant_functionals(g, ActingGroup::Sym2gPlus2, ModuleKind::Cube)?;
    let prime = invariant_functionals(g, ActingGroup::Hyperelliptic, ModuleKind::PrimeSpan)?;
    let psi_ok = cube.dim == 1 && cube.basis[0] == psi_vector(g);
    Ok(vec![
        CheckResult::exact("dim H^0(S_2g+1; H*) = 0", h.dim),
        CheckResult::exact("dim H^0(S_2g+1; (H^3)*) = 1", cube.dim.abs_diff(1)),
        CheckResult::flag("S_2g+1-invariant functional is psi", psi_ok),
        CheckResult::exact("dim H^0(S_2g+2; (H^3)*) = 0", full.dim),
        CheckResult::exact(
            "Delta_g-invariant functionals on (H^3)' = 1",
            prime.dim.abs_diff(1),
        ),
    ])
}

pub fn check_cross_route(g: Genus) -> Result<Vec<CheckResult>> {
    let engine = VolumeEngine::new(g)?;
    let analytic: BTreeMap<String, Half> = volume_table(&engine)?
        .into_iter()
        .filter(|r| matches!(r.element.kind, CanonicalKind::One | CanonicalKind::Two))
        .map(|r| (r.element.tensor.to_string(), r.value.value))
        .collect();
    let table = second_proof_table(g);
    let mismatches = table
        .iter()
        .filter(|r| {
            analytic
                .get(&r.element.tensor.to_string())
                .map(|v| v.as_bit())
                != Some(r.bit)
        })
        .count()
        + analytic.len().abs_diff(table.len());
    let (_, basis_mismatches) = analytic_matches_psi(g, &engine)?;
    Ok(vec![
        CheckResult::exact("psi vs 2I on kinds 1 and 2 (mismatches)", mismatches),
        CheckResult::exact("psi vs 2I on all of B (mismatches)", basis_mismatches),
    ])
}

pub fn check_presentation(g: Genus) -> Result<Vec<CheckResult>> {
    let pres = dual_homology_presentation(g)?;
    let h1 = presentation_h1(&pres);
    let class = connecting_class(g)?;
    Ok(vec![
        CheckResult::flag(
            "Birman-Hilden relators act trivially",
            pres.check_relators().is_ok(),
        ),
        CheckResult::exact("dim H^1(Delta_g; H*) = 1", h1.dim.abs_diff(1)),
        CheckResult::flag("connecting class is a cocycle", class.is_cocycle),
        CheckResult::flag("connecting class is nonzero", class.nonzero),
        CheckResult::flag("connecting class generates H^1", class.equals_generator),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_numbering() {
        assert_eq!(Criterion::PeriodsVsQuadrature.number(), 1);
        assert_eq!(Criterion::PresentationCohomology.number(), 12);
        assert!(Criterion::ALL
            .iter()
            .all(|c| !c.default_genera().is_empty()));
    }

    #[test]
    fn cheap_checks_pass_g3() {
        let g = Genus::new(3).unwrap();
        for c in [
            Criterion::PeriodMatrix,
            Criterion::HarmonicFormulas,
            Criterion::VolumeTable,
            Criterion::Basis,
        ] {
            for r in c.run(&[g], &VerifyConfig::default()).unwrap() {
                assert!(r.pass, "{r}");
            }
        }
    }

    #[test]
    fn result_display() {
        let r = CheckResult::measured("x", 2e-9, 1e-8);
        assert!(r.pass);
        assert!(r.to_string().starts_with("PASS x"));
        assert!(!CheckResult::exact("y", 1).pass);
        assert!(!CheckResult::measured("z", f64::NAN, 1.0).pass);
    }
}
