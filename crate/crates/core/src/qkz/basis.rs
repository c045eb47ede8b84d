//! Bases of the weight subspace with exact transition coefficients.

use num_complex::Complex64 as C64;

use crate::exact::bases::basis_matrix;
use crate::exact::identities::r_entry;
use crate::exact::{subsets, GaussianRational as Gq, ParamSet, Subset};

use super::state::StateVector;
use super::QkzError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Family {
    /// The tensor basis `v_M`.
    Tensor,
    /// `ṽ_M = Σ_N v_N Res w_N(ẑ_M)`.
    Residue,
    /// `ṽ_M` rescaled by `∏_{a<b}(z_{m_a}−z_{m_b})/((z_{m_a}−z_{m_b}−ħ)(z_{m_a}−z_{m_b}+ħ))`.
    Symmetric,
    /// The symmetric basis rescaled by `∏_{k∉M, m∈M}(z_k−z_m)/(z_k−z_m+ħ)`.
    Omega,
}

/// `coeffs[i][j]` is the coefficient of `v_{subsets[j]}` in the `i`-th basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisFamily {
    pub family: Family,
    pub n: usize,
    pub subsets: Vec<Subset>,
    pub coeffs: Vec<Vec<Gq>>,
}

fn inv(x: Gq) -> Result<Gq, QkzError> {
    x.inv().ok_or(QkzError::Exact(crate::exact::ExactError::DivisionByZero))
}

/// Scale factor turning `ṽ_M` into the symmetric basis vector.
fn symmetric_factor(ps: &ParamSet, m: &Subset) -> Result<Gq, QkzError> {
    let h = ps.h();
    let mut f = Gq::one();
    let e = m.elems();
    for a in 0..e.len() {
        for b in a + 1..e.len() {
            let d = &ps.z[e[a]] - &ps.z[e[b]];
            f = &f * &d;
            f = &f * &inv(&(&d - &h) * &(&d + &h))?;
        }
    }
    Ok(f)
}

fn omega_factor(ps: &ParamSet, m: &Subset) -> Result<Gq, QkzError> {
    let h = ps.h();
    let mut f = Gq::one();
    for k in m.complement(ps.n) {
        for &mm in m.elems() {
            let d = &ps.z[k] - &ps.z[mm];
            f = &f * &d;
            f = &f * &inv(&d + &h)?;
        }
    }
    Ok(f)
}

pub fn basis_vectors(ps: &ParamSet, family: Family) -> Result<BasisFamily, QkzError> {
    let subs = subsets(ps.n, ps.ell);
    let size = subs.len();
    let coeffs = match family {
        Family::Tensor => (0..size)
            .map(|i| (0..size).map(|j| if i == j { Gq::one() } else { Gq::zero() }).collect())
            .collect(),
        _ => {
            let bm = basis_matrix(ps)?;
            debug_assert_eq!(bm.subsets, subs);
            let mut rows: Vec<Vec<Gq>> = (0..size).map(|i| (0..size).map(|j| bm.entries[j][i].clone()).collect()).collect();
            if family != Family::Residue {
                for (row, m) in rows.iter_mut().zip(&subs) {
                    let mut s = symmetric_factor(ps, m)?;
                    if family == Family::Omega {
                        s = &s * &omega_factor(ps, m)?;
                    }
                    for x in row.iter_mut() {
                        *x = &*x * &s;
                    }
                }
            }
            rows
        }
    };
    Ok(BasisFamily { family, n: ps.n, subsets: subs, coeffs })
}

impl BasisFamily {
    pub fn index_of(&self, m: &Subset) -> Option<usize> {
        self.subsets.iter().position(|s| s == m)
    }

    /// The basis vectors as complex states.
    pub fn states(&self) -> Vec<StateVector> {
        self.coeffs
            .iter()
            .map(|row| {
                let mut v = StateVector::zeros(self.n);
                for (c, s) in row.iter().zip(&self.subsets) {
                    v.add_to(s, c.to_c64());
                }
                v
            })
            .collect()
    }

    /// Coefficient of `v_N` in the vector labelled by `M`.
    pub fn coefficient(&self, m: &Subset, nn: &Subset) -> Option<&Gq> {
        Some(&self.coeffs[self.index_of(m)?][self.index_of(nn)?])
    }
}

/// `P_{i,i+1} R_{i,i+1}(x)` applied to an exact vector of the weight subspace.
fn swap_r_exact(subs: &[Subset], v: &[Gq], i: usize, x: &Gq, h: &Gq) -> Vec<Gq> {
    let mut out = vec![Gq::zero(); subs.len()];
    for (src, c) in subs.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let inp = (src.contains(i), src.contains(i + 1));
        for o in [(false, false), (false, true), (true, false), (true, true)] {
            let r = r_entry(x, h, o, inp);
            if r.is_zero() {
                continue;
            }
            // R produces signs `o` at (i, i+1); P then exchanges them
            let mut elems: Vec<usize> = src.elems().iter().copied().filter(|&e| e != i && e != i + 1).collect();
            if o.1 {
                elems.push(i);
            }
            if o.0 {
                elems.push(i + 1);
            }
            let dst = Subset::new(elems);
            let k = subs.iter().position(|s| *s == dst).expect("weight preserved");
            out[k] = &out[k] + &(&r * c);
        }
    }
    out
}

/// Exchange relation `u_{s_i M}(s_i z) = P_{i,i+1} R_{i,i+1}(z_i − z_{i+1}) u_M(z)`
/// checked exactly; returns the labels `M` where it fails.
pub fn exchange_failures(ps: &ParamSet, family: Family, i: usize) -> Result<Vec<Subset>, QkzError> {
    let here = basis_vectors(ps, family)?;
    let swapped = basis_vectors(&ps.swap_points(i), family)?;
    let x = &ps.z[i] - &ps.z[i + 1];
    let mut bad = Vec::new();
    for (row, m) in here.coeffs.iter().zip(&here.subsets) {
        let rhs = swap_r_exact(&here.subsets, row, i, &x, &ps.h());
        let lhs = &swapped.coeffs[swapped.index_of(&m.swap_sites(i)).expect("same weight")];
        if lhs != &rhs {
            bad.push(m.clone());
        }
    }
    Ok(bad)
}

/// Complex copy of a coefficient row, for assembly.
pub fn row_c64(row: &[Gq]) -> Vec<C64> {
    row.iter().map(Gq::to_c64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizations() {
        let ps = ParamSet::random(4, 2, 11).unwrap();
        let sym = basis_vectors(&ps, Family::Symmetric).unwrap();
        let ext = Subset::first(2);
        assert!(sym.coefficient(&ext, &ext).unwrap().is_one());
        let om = basis_vectors(&ps, Family::Omega).unwrap();
        let ext2 = Subset::last(4, 2);
        for s in &om.subsets {
            let c = om.coefficient(&ext2, s).unwrap();
            assert!(if *s == ext2 { c.is_one() } else { c.is_zero() }, "{s}: {c}");
        }
    }

    #[test]
    fn exchange_relations_hold_exactly() {
        let ps = ParamSet::random(4, 2, 12).unwrap();
        for family in [Family::Symmetric, Family::Omega] {
            for i in 0..3 {
                assert!(exchange_failures(&ps, family, i).unwrap().is_empty(), "{family:?} at {i}");
            }
        }
    }

    #[test]
    fn residue_basis_picks_up_signs() {
        // the plain residue basis only satisfies the relation up to a sign in the (−,−) sector
        let ps = ParamSet::random(4, 2, 13).unwrap();
        let bad = exchange_failures(&ps, Family::Residue, 0).unwrap();
        assert!(bad.iter().all(|m| m.contains(0) && m.contains(1)));
        assert!(!bad.is_empty());
    }
}
