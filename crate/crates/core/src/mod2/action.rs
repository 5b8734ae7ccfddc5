//! The action of `sigma_1..sigma_{2g+1}` on `H` over GF(2), in the basis
//! `f_1..f_{2g}` where `f_i` is the class of `e'_0 + e'_i` and
//! `f_{2g+1} = f_1 + ... + f_{2g}`.
//!
//! `sigma_j` acts as the transposition `(j-1, j)` of the branch points:
//! `sigma_1` fixes `f_1` and sends `f_i` to `f_1 + f_i`, `sigma_j` (`j >= 2`)
//! swaps `f_{j-1}` and `f_j`.

use crate::curve::Genus;
use crate::error::{Error, Result};
use crate::mod2::gf2::{F2Matrix, F2Vec};
use crate::tensor::{BasisSymbol, TensorElement};

/// `f_i` for `1 <= i <= 2g+1` as a vector over `f_1..f_{2g}`.
pub fn f_vector(g: Genus, i: usize) -> F2Vec {
    let n = 2 * g.get();
    assert!((1..=n + 1).contains(&i), "f index {i} out of range");
    if i <= n {
        F2Vec::unit(n, i - 1)
    } else {
        F2Vec::ones(n)
    }
}

/// Matrix of `sigma_j` on `H_{Z2}`; column `c` is the image of `f_{c+1}`.
pub fn arnold_action(g: Genus, j: usize) -> Result<F2Matrix> {
    let n = 2 * g.get();
    if j == 0 || j > n + 1 {
        return Err(Error::IndexOutOfRange {
            what: "generator",
            index: j as i64,
            max: n as i64 + 1,
        });
    }
    let image = |i: usize| -> F2Vec {
        if j == 1 {
            if i == 1 {
                f_vector(g, 1)
            } else {
                let mut v = f_vector(g, 1);
                v.xor_assign(&f_vector(g, i));
                v
            }
        } else if i == j - 1 {
            f_vector(g, j)
        } else if i == j {
            f_vector(g, j - 1)
        } else {
            f_vector(g, i)
        }
    };
    let cols: Vec<F2Vec> = (1..=n).map(image).collect();
    Ok(F2Matrix::from_columns(n, &cols))
}

pub fn all_generators(g: Genus) -> Vec<F2Matrix> {
    (1..=2 * g.get() + 1)
        .map(|j| arnold_action(g, j).expect("index in range"))
        .collect()
}

/// Columns `x_1..x_g, y_1..y_g` in the f-basis:
/// `x_i = f_{2i-1} + f_{2i}`, `y_i = f_1 + ... + f_{2i-1}`.
pub fn xy_to_f(g: Genus) -> F2Matrix {
    let n = g.get();
    let mut cols = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let mut v = F2Vec::zeros(2 * n);
        v.set(2 * i - 2, true);
        v.set(2 * i - 1, true);
        cols.push(v);
    }
    for i in 1..=n {
        let mut v = F2Vec::zeros(2 * n);
        for k in 0..2 * i - 1 {
            v.set(k, true);
        }
        cols.push(v);
    }
    F2Matrix::from_columns(2 * n, &cols)
}

/// Mod-2 intersection form on the f-basis: `f_i . f_j = 1` iff `i != j`.
pub fn f_pairing(g: Genus) -> F2Matrix {
    let n = 2 * g.get();
    let mut m = F2Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// Mod-2 intersection form on `x_1..x_g, y_1..y_g`.
pub fn xy_pairing(g: Genus) -> F2Matrix {
    let n = g.get();
    let mut m = F2Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, true);
        m.set(n + i, i, true);
    }
    m
}

pub fn cube_index(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

/// `u ⊗ v ⊗ w` in the cube of dimension `n^3`.
pub fn outer3(u: &F2Vec, v: &F2Vec, w: &F2Vec) -> F2Vec {
    let n = u.len();
    let mut out = F2Vec::zeros(n * n * n);
    for a in u.ones_iter() {
        for b in v.ones_iter() {
            for c in w.ones_iter() {
                out.set(cube_index(n, a, b, c), true);
            }
        }
    }
    out
}

/// `(M ⊗ M ⊗ M) v` for `v` in the cube, one slot at a time.
pub fn kron3_apply(m: &F2Matrix, v: &F2Vec) -> F2Vec {
    let n = m.ncols();
    let cols: Vec<F2Vec> = (0..n).map(|c| m.column(c)).collect();
    let mut cur = v.clone();
    for slot in 0..3 {
        let mut next = F2Vec::zeros(n * n * n);
        for idx in cur.ones_iter() {
            let (a, b, c) = (idx / (n * n), idx / n % n, idx % n);
            let moving = [a, b, c][slot];
            for r in cols[moving].ones_iter() {
                let t = match slot {
                    0 => cube_index(n, r, b, c),
                    1 => cube_index(n, a, r, c),
                    _ => cube_index(n, a, b, r),
                };
                next.flip(t);
            }
        }
        cur = next;
    }
    cur
}

/// Row `(a, b, c)` of `(M^T)^{⊗3}`, i.e. the functional
/// `phi -> (phi ∘ M^{⊗3})` evaluated at that monomial.
pub fn kron3_row_of_transpose(m: &F2Matrix, a: usize, b: usize, c: usize) -> F2Vec {
    outer3(&m.column(a), &m.column(b), &m.column(c))
}

/// Mod-2 reduction of an integral tensor, expanded into f-monomials.
pub fn tensor_to_f_cube(g: Genus, t: &TensorElement) -> F2Vec {
    let n = 2 * g.get();
    let tm = xy_to_f(g);
    let col = |s: BasisSymbol| tm.column(s.position(g));
    let mut out = F2Vec::zeros(n * n * n);
    for (s, &c) in t.terms() {
        if c.rem_euclid(2) == 1 {
            out.xor_assign(&outer3(&col(s[0]), &col(s[1]), &col(s[2])));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_involutions() {
        for gi in 3..=6 {
            let g = Genus::new(gi).unwrap();
            for m in all_generators(g) {
                assert!(m.mul(&m).is_identity());
            }
        }
    }

    #[test]
    fn documented_images() {
        let g = Genus::new(3).unwrap();
        let s3 = arnold_action(g, 3).unwrap();
        assert_eq!(s3.column(1), f_vector(g, 3));
        assert_eq!(s3.column(2), f_vector(g, 2));
        let s1 = arnold_action(g, 1).unwrap();
        assert_eq!(s1.column(0), f_vector(g, 1));
        let mut want = f_vector(g, 1);
        want.xor_assign(&f_vector(g, 2));
        assert_eq!(s1.column(1), want);
        // sigma_{2g+1} swaps f_{2g} with f_{2g+1} = sum.
        let last = arnold_action(g, 7).unwrap();
        assert_eq!(last.column(5), F2Vec::ones(6));
        assert!(arnold_action(g, 8).is_err());
    }

    #[test]
    fn substitution_is_symplectic() {
        for gi in 3..=8 {
            let g = Genus::new(gi).unwrap();
            let t = xy_to_f(g);
            let pulled = t.transpose().mul(&f_pairing(g)).mul(&t);
            assert_eq!(pulled, xy_pairing(g));
            assert!(t.inverse().is_some());
        }
        let g = Genus::new(3).unwrap();
        let t = xy_to_f(g);
        assert_eq!(t.column(3).ones_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(t.column(4).ones_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(t.column(0).ones_iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn action_preserves_pairing() {
        let g = Genus::new(4).unwrap();
        let j = f_pairing(g);
        for m in all_generators(g) {
            assert_eq!(m.transpose().mul(&j).mul(&m), j);
        }
    }

    #[test]
    fn kron3_matches_outer_products() {
        let g = Genus::new(3).unwrap();
        let m = arnold_action(g, 1).unwrap();
        let (u, v, w) = (f_vector(g, 2), f_vector(g, 5), f_vector(g, 1));
        let lhs = kron3_apply(&m, &outer3(&u, &v, &w));
        let rhs = outer3(&m.mul_vec(&u), &m.mul_vec(&v), &m.mul_vec(&w));
        assert_eq!(lhs, rhs);
    }
}
