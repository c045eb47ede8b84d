//! Exact identities in Gaussian-rational arithmetic. Residuals count failing items.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Suite};
use crate::exact::bases::{asym, basis_matrix, membership_fcl, membership_fl, random_fl_element, res_at, t_minus, w_fun, w_tilde};
use crate::exact::identities::*;
use crate::exact::{subsets, Combination, ExactError, GaussianRational as Gq, Linear, MultiRatFun, ParamSet, Poly, ZeroTest};
use crate::qkz::{exchange_failures, Family};
use crate::qpoly::{check_generating_function, check_q_decomposition, polynomial_part_swap, q_poly, q_poly_singlet};

use super::{err, CheckSpec, Outcome};

fn zero_test(ps: &ParamSet, seed: u64, probes: usize) -> ZeroTest {
    match ZeroTest::auto(ps.n, ps.ell, seed) {
        ZeroTest::Probabilistic { seed, .. } => ZeroTest::Probabilistic { probes: probes.max(ZeroTest::MIN_PROBES), seed },
        d => d,
    }
}

fn vanishes(c: Result<Combination, ExactError>, mode: ZeroTest) -> Result<bool, String> {
    Ok(c.map_err(err)?.check(mode).zero)
}

/// Random instances for the sizes in `cases`; `salt` separates the checks.
fn instances(seed: u64, salt: u64, cases: &[(usize, usize)]) -> Result<Vec<ParamSet>, String> {
    cases
        .iter()
        .enumerate()
        .map(|(k, &(n, ell))| ParamSet::random(n, ell, seed.wrapping_mul(1000).wrapping_add(salt * 10 + k as u64)).map_err(err))
        .collect()
}

const SMALL: [(usize, usize); 4] = [(2, 1), (3, 1), (4, 2), (5, 2)];

fn random_gq(rng: &mut ChaCha8Rng) -> Gq {
    let d = rng.gen_range(1..=5);
    Gq::complex_frac(rng.gen_range(-9..=9), d, rng.gen_range(-9..=9), d)
}

pub(super) fn checks(cfg: &RunConfig) -> Vec<CheckSpec> {
    let seed = cfg.seed;
    let probes = cfg.probes;
    let s = Suite::Exact;
    let mut out = Vec::new();

    out.push(CheckSpec::new(s, "exact.residue_table", "residue table of the weight functions at the points ẑ_N", move || {
        let mut bad = 0;
        for ps in instances(seed, 1, &SMALL)? {
            bad += residue_table(&ps).map_err(err)?.len();
            bad += usize::from(!basis_matrix(&ps).map_err(err)?.is_triangular_invertible());
            bad += usize::from(!basis_matrix(&ps.classical()).map_err(err)?.is_diagonal());
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.residue_table.six_sites", "residue table of the weight functions at the points ẑ_N", move || {
        let ps = &instances(seed, 2, &[(6, 3)])?[0];
        Ok(Outcome::exact(residue_table(ps).map_err(err)?.len()))
    }));

    out.push(CheckSpec::new(s, "exact.w_expansion", "expansion of w_M in the dual functions w̃_N", move || {
        let mut bad = 0;
        for ps in instances(seed, 3, &[(3, 1), (4, 2), (5, 2), (6, 3)])? {
            let mode = zero_test(&ps, seed, probes);
            let ms = subsets(ps.n, ps.ell);
            // all subsets up to five sites, a spot check of three at six
            let take = if ps.n == 6 { 3 } else { ms.len() };
            for m in ms.iter().take(take) {
                bad += usize::from(!vanishes(w_from_w_tilde(&ps, m), mode)?);
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.extremal_prefactor", "single-term expansion for the extremal subset", move || {
        let mut bad = 0;
        for ps in instances(seed, 4, &[(3, 1), (4, 2), (5, 2), (6, 3)])? {
            bad += usize::from(!vanishes(extremal_prefactor(&ps), zero_test(&ps, seed, probes))?);
        }
        Ok(Outcome::exact(bad))
    }));

    for classical in [false, true] {
        let (id, anchor) = if classical {
            ("exact.sum_rule.classical", "sum rule over added points, classical weight functions")
        } else {
            ("exact.sum_rule.quantum", "sum rule over added points, quantum weight functions")
        };
        out.push(CheckSpec::new(s, id, anchor, move || {
            let mut bad = 0;
            for (n, ell, k) in [(1usize, 1usize, 0u64), (3, 1, 1), (4, 2, 2), (5, 2, 3)] {
                let mut ps = ParamSet::random(n, 0, seed * 1000 + 50 + k).map_err(err)?;
                ps.ell = ell;
                let mode = ZeroTest::auto(n, ell, seed);
                for m in subsets(n, ell - 1) {
                    bad += usize::from(!vanishes(sum_rule(&ps, &m, classical), mode)?);
                }
            }
            Ok(Outcome::exact(bad))
        }));
    }

    out.push(CheckSpec::new(s, "exact.total_difference", "singlet ν̃_M is the total difference of ν_M", move || {
        let mut bad = 0;
        for ps in instances(seed, 6, &[(2, 1), (4, 2), (6, 3)])? {
            let mode = zero_test(&ps, seed, probes);
            for m in subsets(ps.n, ps.ell) {
                bad += usize::from(!vanishes(nu_tilde_is_total_difference(&ps, &m), mode)?);
                bad += usize::from(!vanishes(nu_tilde_cl_is_total_derivative(&ps, &m), mode)?);
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.nu_tilde_partial_fractions", "ν̃_M has simple poles at its own points only", move || {
        let mut bad = 0;
        for ps in instances(seed, 7, &[(2, 1), (4, 2)])? {
            let mode = zero_test(&ps, seed, probes);
            for m in subsets(ps.n, ps.ell) {
                for cl in [false, true] {
                    bad += usize::from(!vanishes(nu_tilde_partial_fractions(&ps, &m, cl), mode)?);
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.w_tilde_via_nu", "reconstruction of w̃_M from the singlet functions ν̃", move || {
        let mut bad = 0;
        for ps in instances(seed, 8, &[(2, 1), (4, 2)])? {
            let mode = zero_test(&ps, seed, probes);
            for m in subsets(ps.n, ps.ell) {
                for cl in [false, true] {
                    bad += usize::from(!vanishes(w_tilde_via_nu(&ps, &m, cl), mode)?);
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.q_decomposition", "decomposition through the polynomials Q_M^(a), all M and m", move || {
        let mut bad = 0;
        for ps in instances(seed, 9, &SMALL)? {
            for m in subsets(ps.n, ps.ell) {
                for &k in m.elems() {
                    bad += usize::from(!vanishes(check_q_decomposition(&ps, &m, k), ZeroTest::Deterministic)?);
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.generating_function", "two-variable generating polynomial reduces to Q_M^(a)", move || {
        let mut bad = 0;
        for ps in instances(seed, 10, &SMALL)? {
            for m in subsets(ps.n, ps.ell) {
                bad += usize::from(!check_generating_function(&ps, &m).map_err(err)?.holds());
                if 2 * ps.ell == ps.n {
                    for a in 1..=ps.ell {
                        bad += usize::from(q_poly(&ps, &m, a).map_err(err)? != q_poly_singlet(&ps, &m, a).map_err(err)?);
                    }
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.top_q_vanishes", "top polynomial Q_M^(ℓ) vanishes identically at n = 2ℓ", move || {
        let mut bad = 0;
        for ps in instances(seed, 11, &[(2, 1), (4, 2), (6, 3)])? {
            for m in subsets(ps.n, ps.ell) {
                bad += usize::from(!q_poly(&ps, &m, ps.ell).map_err(err)?.is_zero());
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.polynomial_part_swap", "polynomial parts of f(u)/(u−x) and f(x)/(x−u) agree", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(7919).wrapping_add(12));
        let mut bad = 0;
        for _ in 0..50 {
            let deg = rng.gen_range(0..=4);
            let coeffs: Vec<Gq> = (0..=deg).map(|_| random_gq(&mut rng)).collect();
            let mut f = MultiRatFun::from_poly(Poly::from_coeffs(&coeffs));
            for _ in 0..rng.gen_range(0..=2) {
                let a = random_gq(&mut rng);
                f = f.div_linear(&Linear::var_shift(1, 0, -a)).map_err(err)?;
            }
            bad += usize::from(!polynomial_part_swap(&f).map_err(err)?.is_zero());
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.exchange_relation", "R-matrix symmetry of the weight functions", move || {
        let mut bad = 0;
        for ps in instances(seed, 13, &[(2, 1), (3, 1), (4, 2)])? {
            let mode = zero_test(&ps, seed, probes);
            for i in 0..ps.n - 1 {
                for m in subsets(ps.n, ps.ell) {
                    bad += usize::from(!vanishes(exchange_relation(&ps, i, &m), mode)?);
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.basis_exchange", "exchange property of the symmetric and ω bases", move || {
        let mut bad = 0;
        for ps in instances(seed, 14, &[(3, 1), (4, 2), (5, 2)])? {
            for family in [Family::Symmetric, Family::Omega] {
                for i in 0..ps.n - 1 {
                    bad += exchange_failures(&ps, family, i).map_err(err)?.len();
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    out.push(CheckSpec::new(s, "exact.membership", "membership in the weight-function space and the residue expansion", move || {
        let mut bad = 0;
        for ps in instances(seed, 15, &[(3, 1), (4, 2)])? {
            let f = random_fl_element(&ps, seed).map_err(err)?;
            bad += usize::from(!membership_fl(&ps, &f).map_err(err)?.holds());
            let mut c = Combination::new().plus(f.clone());
            for m in subsets(ps.n, ps.ell) {
                c.push(-res_at(&f, &ps, &m).map_err(err)?, w_tilde(&ps, &m).map_err(err)?);
            }
            bad += usize::from(!c.check(ZeroTest::Deterministic).zero);
            let cl = ps.classical();
            for m in subsets(ps.n, ps.ell) {
                bad += usize::from(!membership_fl(&ps, &w_fun(&ps, &m).map_err(err)?).map_err(err)?.holds());
                bad += usize::from(!membership_fcl(&cl, &w_tilde(&cl, &m).map_err(err)?).map_err(err)?.holds());
            }
        }
        // negative control: an antisymmetric function violating the residue condition
        let ps = &instances(seed, 16, &[(4, 2)])?[0];
        let g = MultiRatFun::inv_linear(&t_minus(2, 0, &ps.z[0]))
            .map_err(err)?
            .mul(&MultiRatFun::inv_linear(&t_minus(2, 1, &ps.z[0])).map_err(err)?)
            .mul_linear(&Linear::var(2, 0));
        bad += usize::from(membership_fl(ps, &asym(&g)).map_err(err)?.holds());
        Ok(Outcome::exact(bad))
    }));

    out
}
