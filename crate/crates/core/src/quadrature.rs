//! Independent numerical oracle: tanh-sinh quadrature of single and
//! length-two iterated integrals along words in the `e_j`.
//!
//! Each half-letter is integrated in a local time `tau` in `[0, 1]`; the
//! integrands blow up like `gap^(-1/2)` at the branch point, so nodes carry
//! their exact distance to both ends and the curve is sampled from that
//! distance rather than from the rounded abscissa.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::curve::{path_sample, Genus, Half, PathLetter, PathWord};
use crate::error::{Error, Result};
use crate::periods::{omega_scale, FormKind, FormRef};
use crate::tolerances::{QUAD_ABS_TOL, QUAD_DEFAULT_LEVEL};

type C = Complex64;

/// Abscissa with its distances to the interval ends.
#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub x: f64,
    pub from_a: f64,
    pub to_b: f64,
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: C,
    pub error: f64,
    pub level: u32,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct QuadVecResult {
    pub values: Vec<C>,
    pub error: f64,
    pub level: u32,
    pub evaluations: usize,
}

const T_MAX: f64 = 6.5;
/// Tail terms below this (relative to the running sum) end a level early.
const TAIL: f64 = 1e-18;
const MIN_LEVEL: u32 = 3;

#[derive(Clone, Copy, Debug)]
pub struct TanhSinh {
    max_level: u32,
    abs_tol: f64,
}

impl TanhSinh {
    pub fn new(max_level: u32, abs_tol: f64) -> Self {
        TanhSinh { max_level, abs_tol }
    }

    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<QuadResult>
    where
        F: FnMut(Node) -> C,
    {
        let r = self.integrate_span(a, b - a, 1, |n, out| out[0] = f(n))?;
        Ok(QuadResult {
            value: r.values[0],
            error: r.error,
            level: r.level,
            evaluations: r.evaluations,
        })
    }

    /// Vector-valued integral over `[a, a + len]`; `f` writes `dim` values.
    /// Convergence is judged on the largest component change between levels.
    pub fn integrate_span<F>(&self, a: f64, len: f64, dim: usize, mut f: F) -> Result<QuadVecResult>
    where
        F: FnMut(Node, &mut [C]),
    {
        let half = 0.5 * len;
        let zero = C::new(0.0, 0.0);
        let mut sum = vec![zero; dim];
        let mut buf = vec![zero; dim];
        let mut prev: Option<Vec<C>> = None;
        let mut evaluations = 0;
        let mut last_err = f64::INFINITY;
        for level in 0..=self.max_level {
            let h = 0.5f64.powi(level as i32);
            let (mut k, step) = if level == 0 { (0i64, 1) } else { (1i64, 2) };
            let kmax = (T_MAX / h).ceil() as i64;
            while k <= kmax {
                let t = k as f64 * h;
                let v = FRAC_PI_2 * t.sinh();
                let e = (-2.0 * v).exp();
                let cv = v.cosh();
                let w = FRAC_PI_2 * t.cosh() / (cv * cv) * half;
                let near = half * 2.0 * e / (1.0 + e);
                if w == 0.0 || near == 0.0 {
                    break;
                }
                let far = len - near;
                f(
                    Node {
                        x: a + far,
                        from_a: far,
                        to_b: near,
                    },
                    &mut buf,
                );
                let mut term = 0.0f64;
                for (s, b) in sum.iter_mut().zip(&buf) {
                    *s += b * w;
                    term = term.max((b * w).norm());
                }
                evaluations += 1;
                if k != 0 {
                    f(
                        Node {
                            x: a + near,
                            from_a: near,
                            to_b: far,
                        },
                        &mut buf,
                    );
                    for (s, b) in sum.iter_mut().zip(&buf) {
                        *s += b * w;
                        term = term.max((b * w).norm());
                    }
                    evaluations += 1;
                }
                if t > 2.0
                    && term
                        <= TAIL
                            * sum
                                .iter()
                                .map(|c| c.norm())
                                .fold(f64::MIN_POSITIVE, f64::max)
                {
                    break;
                }
                k += step;
            }
            let est: Vec<C> = sum.iter().map(|s| s * h).collect();
            if let Some(p) = &prev {
                last_err = est
                    .iter()
                    .zip(p)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                if level >= MIN_LEVEL && last_err <= self.abs_tol {
                    return Ok(QuadVecResult {
                        values: est,
                        error: last_err,
                        level,
                        evaluations,
                    });
                }
            }
            if est.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                break;
            }
            prev = Some(est);
        }
        Err(Error::QuadratureNotConverged {
            level: self.max_level,
            estimate: last_err,
            tolerance: self.abs_tol,
        })
    }
}

/// Optional reparametrisation of each half-letter, used to check that the
/// oracle does not depend on the parametrisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Clustering {
    #[default]
    Identity,
    /// `tau = u^3`.
    Cubic,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadConfig {
    pub max_level: u32,
    pub abs_tol: f64,
    pub clustering: Clustering,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            max_level: QUAD_DEFAULT_LEVEL,
            abs_tol: QUAD_ABS_TOL,
            clustering: Clustering::Identity,
        }
    }
}

impl QuadConfig {
    pub fn new(max_level: u32, abs_tol: f64) -> Result<Self> {
        if !(4..=14).contains(&max_level) {
            return Err(Error::Config(format!(
                "quadrature level {max_level} outside 4..=14"
            )));
        }
        if !(abs_tol >= 1e-13) {
            return Err(Error::Config(format!(
                "quadrature tolerance {abs_tol:e} below 1e-13"
            )));
        }
        Ok(QuadConfig {
            max_level,
            abs_tol,
            clustering: Clustering::Identity,
        })
    }

    pub fn with_clustering(self, clustering: Clustering) -> Self {
        QuadConfig { clustering, ..self }
    }

    fn rule(&self) -> TanhSinh {
        TanhSinh::new(self.max_level, self.abs_tol)
    }
}

/// Evaluates pulled-back forms on one half-letter in the local variable `u`.
struct Piece<'a> {
    g: Genus,
    letter: PathLetter,
    half: Half,
    clustering: Clustering,
    forms: &'a [(FormKind, usize, C)],
}

impl Piece<'_> {
    /// `u` in `[0, 1]`, `sing` its exact distance to the branch-point end
    /// (`u = 1` when incoming, `u = 0` when outgoing).
    fn eval(&self, u: f64, sing: f64, out: &mut [C]) {
        let (gap, dtau) = match (self.clustering, self.half) {
            (Clustering::Identity, _) => (0.5 * sing, 1.0),
            (Clustering::Cubic, Half::Incoming) => (0.5 * sing * (1.0 + u + u * u), 3.0 * u * u),
            (Clustering::Cubic, Half::Outgoing) => (0.5 * sing * sing * sing, 3.0 * u * u),
        };
        if gap <= 0.0 {
            // Only reachable when u^3 underflows; the pulled-back form
            // vanishes like u^(1/2) there.
            out.iter_mut().for_each(|o| *o = C::new(0.0, 0.0));
            return;
        }
        let s = path_sample(self.g, self.letter, self.half, gap);
        // dt/dtau = 1/2 on each half.
        let base = s.dz_dt / s.point.w * (0.5 * dtau);
        for (o, &(kind, i, scale)) in out.iter_mut().zip(self.forms) {
            let v = s.point.z.powu(i as u32 - 1) * base * scale;
            *o = if kind == FormKind::OmegaPrimeConj {
                v.conj()
            } else {
                v
            };
        }
    }

    fn sing(&self, n: &Node) -> f64 {
        match self.half {
            Half::Incoming => n.to_b,
            Half::Outgoing => n.from_a,
        }
    }
}

fn prepare(g: Genus, forms: &[FormRef]) -> Result<Vec<(FormKind, usize, C)>> {
    forms
        .iter()
        .map(|f| {
            match f.kind {
                FormKind::Alpha => return Err(Error::UnsupportedForm("alpha")),
                FormKind::Beta => return Err(Error::UnsupportedForm("beta")),
                _ => {}
            }
            Ok((f.kind, f.index, omega_scale(g, f.index)?))
        })
        .collect()
}

fn pieces(word: &PathWord) -> impl Iterator<Item = (PathLetter, Half)> + '_ {
    word.letters()
        .iter()
        .flat_map(|&l| [(l, Half::Incoming), (l, Half::Outgoing)])
}

/// Integrals of several forms over a word.
pub fn quad_periods(
    g: Genus,
    forms: &[FormRef],
    word: &PathWord,
    cfg: &QuadConfig,
) -> Result<QuadVecResult> {
    let prepared = prepare(g, forms)?;
    let rule = cfg.rule();
    let mut values = vec![C::new(0.0, 0.0); forms.len()];
    let mut error = 0.0;
    let mut level = 0;
    let mut evaluations = 0;
    for (letter, half) in pieces(word) {
        let p = Piece {
            g,
            letter,
            half,
            clustering: cfg.clustering,
            forms: &prepared,
        };
        let r =
            rule.integrate_span(0.0, 1.0, forms.len(), |n, out| p.eval(n.x, p.sing(&n), out))?;
        for (v, x) in values.iter_mut().zip(&r.values) {
            *v += x;
        }
        error += r.error;
        level = level.max(r.level);
        evaluations += r.evaluations;
    }
    Ok(QuadVecResult {
        values,
        error,
        level,
        evaluations,
    })
}

pub fn quad_period(
    g: Genus,
    form: FormRef,
    letter: PathLetter,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let r = quad_periods(g, &[form], &PathWord::new(vec![letter]), cfg)?;
    Ok(QuadResult {
        value: r.values[0],
        error: r.error,
        level: r.level,
        evaluations: r.evaluations,
    })
}

/// All `int_word f1 f2` for `f1` in `firsts`, `f2` in `seconds`, as a
/// row-major `firsts.len() x seconds.len()` block.
pub fn quad_iterated_many(
    g: Genus,
    firsts: &[FormRef],
    seconds: &[FormRef],
    word: &PathWord,
    cfg: &QuadConfig,
) -> Result<QuadVecResult> {
    let p1 = prepare(g, firsts)?;
    let p2 = prepare(g, seconds)?;
    let (n1, n2) = (firsts.len(), seconds.len());
    let rule = cfg.rule();
    let zero = C::new(0.0, 0.0);
    let mut acc = vec![zero; n1];
    let mut total = vec![zero; n1 * n2];
    let mut error = 0.0;
    let mut level = 0;
    let mut evaluations = 0;
    for (letter, half) in pieces(word) {
        let piece1 = Piece {
            g,
            letter,
            half,
            clustering: cfg.clustering,
            forms: &p1,
        };
        let piece2 = Piece {
            forms: &p2,
            ..piece1
        };
        let s1 = rule.integrate_span(0.0, 1.0, n1, |n, out| {
            piece1.eval(n.x, piece1.sing(&n), out)
        })?;
        let s2 = rule.integrate_span(0.0, 1.0, n2, |n, out| {
            piece2.eval(n.x, piece2.sing(&n), out)
        })?;

        let mut inner_err: f64 = 0.0;
        let mut inner_evals = 0;
        let mut inner_fail: Option<Error> = None;
        let mut v2 = vec![zero; n2];
        let nested = rule.integrate_span(0.0, 1.0, n1 * n2, |n, out| {
            // Primitive of f1 from the start of the piece; always integrate
            // over the sub-interval that touches the branch point.
            let inner = match half {
                Half::Incoming => {
                    rule.integrate_span(n.x, n.to_b, n1, |m, o| piece1.eval(m.x, m.to_b, o))
                }
                Half::Outgoing => {
                    rule.integrate_span(0.0, n.from_a, n1, |m, o| piece1.eval(m.x, m.from_a, o))
                }
            };
            let f = match inner {
                Ok(r) => {
                    inner_err = inner_err.max(r.error);
                    inner_evals += r.evaluations;
                    match half {
                        Half::Incoming => s1
                            .values
                            .iter()
                            .zip(&r.values)
                            .map(|(t, s)| t - s)
                            .collect(),
                        Half::Outgoing => r.values,
                    }
                }
                Err(e) => {
                    inner_fail.get_or_insert(e);
                    vec![zero; n1]
                }
            };
            piece2.eval(n.x, piece2.sing(&n), &mut v2);
            for a in 0..n1 {
                for b in 0..n2 {
                    out[a * n2 + b] = f[a] * v2[b];
                }
            }
        })?;
        if let Some(e) = inner_fail {
            return Err(e);
        }
        for a in 0..n1 {
            for b in 0..n2 {
                total[a * n2 + b] += nested.values[a * n2 + b] + acc[a] * s2.values[b];
            }
        }
        for (x, y) in acc.iter_mut().zip(&s1.values) {
            *x += y;
        }
        error += nested.error + inner_err + s1.error + s2.error;
        level = level.max(nested.level);
        evaluations += nested.evaluations + inner_evals + s1.evaluations + s2.evaluations;
    }
    Ok(QuadVecResult {
        values: total,
        error,
        level,
        evaluations,
    })
}

pub fn quad_iterated(
    g: Genus,
    f1: FormRef,
    f2: FormRef,
    word: &PathWord,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let r = quad_iterated_many(g, &[f1], &[f2], word, cfg)?;
    Ok(QuadResult {
        value: r.values[0],
        error: r.error,
        level: r.level,
        evaluations: r.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{loop_word, LoopSymbol};
    use crate::kernel::zeta_pow;
    use crate::tolerances::QUAD_PERIOD_RELATIVE;

    #[test]
    fn smooth_and_endpoint_singular() {
        let ts = TanhSinh::new(8, 1e-13);
        let r = ts.integrate(0.0, 2.0, |n| C::new(n.x * n.x, 0.0)).unwrap();
        assert!((r.value.re - 8.0 / 3.0).abs() < 1e-12);
        let r = ts
            .integrate(0.0, 1.0, |n| C::new(1.0 / n.from_a.sqrt(), 0.0))
            .unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-12);
        let r = ts
            .integrate(-1.0, 1.0, |n| C::new(1.0 / (n.from_a * n.to_b).sqrt(), 0.0))
            .unwrap();
        assert!((r.value.re - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn not_converged_is_reported() {
        let ts = TanhSinh::new(4, 1e-15);
        let r = ts.integrate(0.0, 1.0, |n| C::new((200.0 * n.x).sin(), 0.0));
        assert!(matches!(r, Err(Error::QuadratureNotConverged { .. })));
    }

    #[test]
    fn config_range() {
        assert!(QuadConfig::new(3, 1e-12).is_err());
        assert!(QuadConfig::new(15, 1e-12).is_err());
        assert!(QuadConfig::new(8, 1e-14).is_err());
        assert!(QuadConfig::new(8, 1e-12).is_ok());
    }

    #[test]
    fn segment_periods_g3() {
        let g = Genus::new(3).unwrap();
        let cfg = QuadConfig::default();
        for j in 0..8 {
            for i in 1..=3 {
                let r = quad_period(g, FormRef::omega(i), PathLetter::plain(j), &cfg).unwrap();
                let want = zeta_pow(g, (i * j) as i64);
                assert!(
                    (r.value - want).norm() < QUAD_PERIOD_RELATIVE,
                    "i={i} j={j} {} {}",
                    r.value,
                    want
                );
            }
        }
    }

    #[test]
    fn iterated_on_single_letter_is_half_product() {
        let g = Genus::new(3).unwrap();
        let cfg = QuadConfig::default();
        let w = PathWord::new(vec![PathLetter::involuted(5)]);
        let r = quad_iterated(g, FormRef::omega(2), FormRef::omega_conj(3), &w, &cfg).unwrap();
        let want = 0.5 * zeta_pow(g, 10) * zeta_pow(g, -15);
        assert!((r.value - want).norm() < 1e-9, "{} vs {}", r.value, want);
    }

    #[test]
    fn cubic_clustering_agrees() {
        let g = Genus::new(3).unwrap();
        let w = loop_word(g, LoopSymbol::B(2)).unwrap();
        let base = QuadConfig::default();
        let a = quad_iterated(g, FormRef::omega(1), FormRef::omega(3), &w, &base).unwrap();
        let b = quad_iterated(
            g,
            FormRef::omega(1),
            FormRef::omega(3),
            &w,
            &base.with_clustering(Clustering::Cubic),
        )
        .unwrap();
        assert!((a.value - b.value).norm() < 1e-9);
    }

    #[test]
    fn harmonic_forms_rejected() {
        let g = Genus::new(3).unwrap();
        let r = quad_period(
            g,
            FormRef::beta(1),
            PathLetter::plain(0),
            &QuadConfig::default(),
        );
        assert_eq!(r.unwrap_err(), Error::UnsupportedForm("beta"));
    }
}
