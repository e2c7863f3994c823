//! The acceptance battery. One test per numbered criterion; each prints a
//! single PASS line (run with `--nocapture` to see them on success). Every
//! assertion is exact unless the criterion itself is a Monte Carlo bound.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitlab_core::complex_roots::Weight;
use orbitlab_core::context::{analyze, AlgebraContext};
use orbitlab_core::exact::{rat, vec_dot, Rational};
use orbitlab_core::multiplicity::{multiplicity_report, MultiplicityError};
use orbitlab_core::orbit::{
    cone_tests, h_covector, kostant_hull_check, sign_constancy_check, verify_dichotomy,
    SignatureOutcome, Verdict,
};
use orbitlab_core::realforms::RealFormSpec;

const SCOPE: [(&str, &str, &[usize]); 9] = [
    ("su(1,1)", "su", &[1, 1]),
    ("su(2,1)", "su", &[2, 1]),
    ("su(2,2)", "su", &[2, 2]),
    ("sp(4,R)", "sp", &[2]),
    ("sp(6,R)", "sp", &[3]),
    ("so(2,4)", "so", &[2, 4]),
    ("so*(6)", "sostar", &[3]),
    ("so(4,1)", "so", &[4, 1]),
    ("so(5,1)", "so", &[5, 1]),
];

const HERMITIAN: [&str; 7] = [
    "su(1,1)",
    "su(2,1)",
    "su(2,2)",
    "sp(4,R)",
    "sp(6,R)",
    "so(2,4)",
    "so*(6)",
];

fn forms() -> &'static Vec<(&'static str, AlgebraContext)> {
    static ALL: OnceLock<Vec<(&'static str, AlgebraContext)>> = OnceLock::new();
    ALL.get_or_init(|| {
        SCOPE
            .iter()
            .map(|(name, family, params)| {
                let spec = RealFormSpec::parse(family, params).unwrap();
                (*name, analyze(&spec).unwrap())
            })
            .collect()
    })
}

fn ctx(name: &str) -> &'static AlgebraContext {
    &forms().iter().find(|(n, _)| *n == name).unwrap().1
}

fn multiplicity_profile(ctx: &AlgebraContext) -> Vec<(Vec<i64>, usize)> {
    ctx.sys
        .positive_roots()
        .map(|r| {
            let coords: Vec<i64> = r
                .coords
                .iter()
                .map(|c| {
                    assert!(c.is_integer());
                    c.to_integer().try_into().unwrap()
                })
                .collect();
            (coords, r.multiplicity())
        })
        .collect()
}

#[test]
fn acceptance_01_structure_exactness() {
    let t0 = Instant::now();
    for (name, _, _) in SCOPE {
        let alg = &ctx(name).form.algebra;
        let n = alg.dim();
        let basis: Vec<Vec<Rational>> = (0..n).map(|i| alg.basis_vector(i)).collect();
        // All pairwise brackets once; everything below reads from this table.
        let bb: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|i| (0..n).map(|j| alg.bracket(&basis[i], &basis[j])).collect())
            .collect();
        // Killing rows against the basis, for cheap form evaluations.
        let krow: Vec<Vec<Rational>> = (0..n)
            .map(|j| alg.killing_gram().mul_vec(&basis[j]))
            .collect();

        for i in 0..n {
            for j in i..n {
                // Antisymmetry.
                let neg: Vec<Rational> = bb[j][i].iter().map(|c| -c.clone()).collect();
                assert_eq!(bb[i][j], neg, "{name}: [e{i},e{j}] antisymmetry");
                // theta is an automorphism and an involution.
                let lhs = alg.theta_apply(&bb[i][j]);
                let rhs = alg.bracket(&alg.theta_apply(&basis[i]), &alg.theta_apply(&basis[j]));
                assert_eq!(lhs, rhs, "{name}: theta automorphism at ({i},{j})");
                // The Killing form is theta-invariant.
                let a = alg.killing(&alg.theta_apply(&basis[i]), &alg.theta_apply(&basis[j]));
                assert_eq!(a, vec_dot(&krow[i], &basis[j]), "{name}: K theta-invariance");
            }
            assert_eq!(
                alg.theta_apply(&alg.theta_apply(&basis[i])),
                basis[i],
                "{name}: theta involution at {i}"
            );
        }
        // Jacobi on all unordered triples (enough, with bilinearity and
        // antisymmetry already checked).
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut jac = alg.bracket(&basis[i], &bb[j][k]);
                    for (t, c) in alg.bracket(&basis[j], &bb[k][i]).into_iter().enumerate() {
                        jac[t] += c;
                    }
                    for (t, c) in alg.bracket(&basis[k], &bb[i][j]).into_iter().enumerate() {
                        jac[t] += c;
                    }
                    assert!(
                        jac.iter().all(|c| c.is_zero()),
                        "{name}: Jacobi fails at ({i},{j},{k})"
                    );
                }
            }
        }
        // Invariance K([x,y],z) + K(y,[x,z]) = 0 on all basis triples.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = vec_dot(&krow[k], &bb[i][j]) + vec_dot(&krow[j], &bb[i][k]);
                    assert!(s.is_zero(), "{name}: K invariance fails at ({i},{j},{k})");
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(120), "budget blown: {elapsed:?}");
    println!(
        "ACCEPTANCE 1: PASS - Jacobi, theta, and Killing invariance exact on all 9 algebras ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn acceptance_02_restricted_root_multiplicities() {
    // Stored order is descending, so the longer root comes first.
    assert_eq!(
        multiplicity_profile(ctx("su(2,1)")),
        vec![(vec![2], 1), (vec![1], 2)]
    );
    for name in ["sp(4,R)", "sp(6,R)"] {
        let profile = multiplicity_profile(ctx(name));
        assert!(profile.iter().all(|(_, m)| *m == 1), "{name} not split");
    }
    let mut long = 0;
    let mut short = 0;
    for (coords, mult) in multiplicity_profile(ctx("so(2,4)")) {
        match coords.iter().map(|c| c * c).sum::<i64>() {
            2 => {
                assert_eq!(mult, 1);
                long += 1;
            }
            1 => {
                assert_eq!(mult, 2);
                short += 1;
            }
            other => panic!("unexpected root norm {other}"),
        }
    }
    assert_eq!((long, short), (2, 2));
    assert_eq!(multiplicity_profile(ctx("so(4,1)")), vec![(vec![1], 3)]);
    assert_eq!(multiplicity_profile(ctx("so(5,1)")), vec![(vec![1], 4)]);
    println!("ACCEPTANCE 2: PASS - restricted root multiplicities match the classical tables");
}

#[test]
fn acceptance_03_open_orbit_criterion() {
    for name in HERMITIAN {
        let c = ctx(name);
        assert!(c.cascade.has_open_orbits(), "{name} should satisfy the criterion");
        assert_eq!(
            c.cascade.representatives().len(),
            1usize << c.cascade.cascade_rank(),
            "{name} representative count"
        );
    }
    for name in ["so(4,1)", "so(5,1)"] {
        assert!(!ctx(name).cascade.has_open_orbits(), "{name} must fail the criterion");
    }
    assert_eq!(ctx("sp(4,R)").cascade.representatives().len(), 4);
    assert_eq!(ctx("su(2,1)").cascade.representatives().len(), 2);
    println!("ACCEPTANCE 3: PASS - open orbits exactly on the Hermitian entries, 2^r per algebra");
}

#[test]
fn acceptance_04_canonical_representatives_open() {
    let t0 = Instant::now();
    for name in HERMITIAN {
        let c = ctx(name);
        let engine = c.engine().unwrap();
        for (signs, _) in c.cascade.representatives() {
            let s = engine.canonical_representative(&signs).unwrap();
            assert!(
                engine.frame.is_open_orbit_point(&s).unwrap(),
                "{name}: representative {signs:?} not open"
            );
            assert_eq!(
                engine.cascade_signature(&s).unwrap(),
                SignatureOutcome::Open(signs.clone()),
                "{name}: representative {signs:?} signature"
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(10), "budget blown: {elapsed:?}");
    println!(
        "ACCEPTANCE 4: PASS - all 2^r canonical representatives have full KKS rank ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn acceptance_05_openness_equivalence() {
    let mut total = 0usize;
    for name in HERMITIAN {
        let c = ctx(name);
        let engine = c.engine().unwrap();
        let dim = engine.frame.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for _ in 0..1000 {
            let lam: Vec<Rational> = (0..dim)
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=3)))
                .collect();
            let by_rank = engine.frame.is_open_orbit_point(&lam).unwrap();
            let by_signature = engine.cascade_signature(&lam).unwrap().is_open();
            assert_eq!(by_rank, by_signature, "{name}: disagreement at {lam:?}");
            total += 1;
        }
    }
    assert_eq!(total, 7000);
    println!(
        "ACCEPTANCE 5: PASS - KKS rank and cascade signature agree on {total} random functionals"
    );
}

#[test]
fn acceptance_06_theorem_holomorphic_branch() {
    let sp4 = ctx("sp(4,R)");
    let engine = sp4.engine().unwrap();
    let out = verify_dichotomy(&engine, &Weight(vec![rat(2, 1), rat(1, 1)]), 200, 20260818).unwrap();
    assert_eq!(out.verdict, Verdict::ConsistentHolomorphic);
    assert_eq!(out.n_samples, 200);
    assert_eq!(out.histogram.len(), 1, "mixed signatures: {:?}", out.histogram);
    let (key, count) = out.histogram.iter().next().unwrap();
    assert!(key.starts_with("open"), "unexpected signature class {key}");
    assert_eq!(*count, 200);

    for name in ["su(1,1)", "su(2,1)"] {
        let c = ctx(name);
        let engine = c.engine().unwrap();
        let f = c.croots.as_ref().unwrap().rho_g_holomorphic.clone().unwrap();
        let out = verify_dichotomy(&engine, &f, 200, 20260818).unwrap();
        assert_eq!(out.verdict, Verdict::ConsistentHolomorphic, "{name}");
        assert_eq!(out.histogram.len(), 1, "{name}: {:?}", out.histogram);
    }
    println!("ACCEPTANCE 6: PASS - holomorphic functionals project to one constant open signature");
}

#[test]
fn acceptance_07_theorem_nonholomorphic_branch() {
    let sp4 = ctx("sp(4,R)");
    let engine = sp4.engine().unwrap();
    let out = verify_dichotomy(&engine, &Weight(vec![rat(2, 1), rat(-1, 1)]), 500, 20260818).unwrap();
    // INCONCLUSIVE is a legal driver outcome but fails acceptance: the
    // witness must actually be found within the budget.
    assert_eq!(out.verdict, Verdict::ConsistentNonholomorphic);
    assert!(!out.witnesses.is_empty(), "no witness recorded");
    println!(
        "ACCEPTANCE 7: PASS - non-holomorphic witness found ({})",
        out.witnesses[0]
    );
}

#[test]
fn acceptance_08_sign_lemma() {
    let sp4 = ctx("sp(4,R)");
    let engine = sp4.engine().unwrap();
    let out = sign_constancy_check(&engine, 500, 0x41).unwrap();
    assert_eq!(out.samples_per_orbit, 500);
    assert_eq!(out.orbits_checked, 4);
    assert!(
        out.flip_witness.is_some(),
        "expected a sign flip on a later slot in sp(4,R)"
    );

    let su11 = ctx("su(1,1)");
    let engine = su11.engine().unwrap();
    let out = sign_constancy_check(&engine, 500, 0x41).unwrap();
    assert_eq!(out.samples_per_orbit, 500);
    assert_eq!(out.orbits_checked, 2);
    assert!(out.flip_witness.is_none(), "rank one has no later slot to flip");
    println!("ACCEPTANCE 8: PASS - first-slot sign constant on 500 AN-samples per orbit, X2 flip witnessed");
}

#[test]
fn acceptance_09_kostant_hull() {
    for name in ["sp(4,R)", "su(2,1)", "su(2,2)", "so(2,4)"] {
        let croots = ctx(name).croots.as_ref().unwrap();
        assert!(
            kostant_hull_check(croots).unwrap(),
            "{name}: noncompact roots escape the hull"
        );
    }
    println!("ACCEPTANCE 9: PASS - exact hull membership of the noncompact positive roots");
}

#[test]
fn acceptance_10_cone_suite() {
    for name in HERMITIAN {
        let c = ctx(name);
        let engine = c.engine().unwrap();
        let f = c.croots.as_ref().unwrap().rho_g_holomorphic.clone().unwrap();
        let out = cone_tests(&engine, &f, 100, 20260818).unwrap();
        // "All-plus" lives in the basis aligned to f: the generators are
        // taken with f(X_j + theta X_j) > 0, so in stored coordinates the
        // aligned chamber is the pattern of those signs. cone_tests fails
        // hard unless every projection signature equals that pattern, which
        // is exactly all-plus after realignment; the counters certify how
        // many samples were checked. The stored sign of a one-dimensional
        // root space is an elimination artifact with no invariant meaning.
        assert!(
            out.pattern.iter().all(|s| *s == 1 || *s == -1),
            "{name}: degenerate alignment {:?}",
            out.pattern
        );
        assert_eq!(out.pv_pairs, 100, "{name}");
        assert_eq!(out.projection_signatures, 100, "{name}");
        assert_eq!(out.translate_signatures, 100, "{name}");
        assert!(out.omega_pairs >= 100, "{name}: {} omega pairs", out.omega_pairs);
        assert!(out.cross_pairs >= 100, "{name}: {} cross pairs", out.cross_pairs);
    }
    println!(
        "ACCEPTANCE 10: PASS - 100 strict cone pairs per algebra, all projections all-plus in the aligned basis"
    );
}

#[test]
fn acceptance_11_multiplicity_chain() {
    let sp4 = ctx("sp(4,R)");
    let engine = sp4.engine().unwrap();
    let mut grid = 0;
    for a in 2..=7i64 {
        for b in 1..a {
            let rep =
                multiplicity_report(&engine, &Weight(vec![rat(a, 1), rat(b, 1)]), 0, 7).unwrap();
            assert_eq!(rep.common_value, rat(a - b, 1), "sp(4,R) at ({a},{b})");
            grid += 1;
        }
    }
    assert!(grid >= 20, "sp(4,R) grid too small: {grid}");
    let pinned = multiplicity_report(&engine, &Weight(vec![rat(3, 1), rat(1, 1)]), 0, 7).unwrap();
    assert_eq!(pinned.common_value, rat(2, 1));

    let su21 = ctx("su(2,1)");
    let engine21 = su21.engine().unwrap();
    let mut admissible = 0;
    for a in -9..=9i64 {
        for b in -9..=9i64 {
            match multiplicity_report(&engine21, &Weight(vec![rat(a, 1), rat(b, 1)]), 0, 7) {
                Ok(_) => admissible += 1,
                Err(
                    MultiplicityError::NotRegular(_)
                    | MultiplicityError::NotHolomorphic
                    | MultiplicityError::NonDominant(_),
                ) => {}
                Err(other) => panic!("su(2,1) at ({a},{b}): chain broke: {other}"),
            }
        }
    }
    assert!(admissible >= 20, "su(2,1) grid too small: {admissible}");

    // Monte Carlo sphere factor at the pinned point, 2% at 1e6 samples.
    let t0 = Instant::now();
    let mc_rep =
        multiplicity_report(&engine, &Weight(vec![rat(3, 1), rat(1, 1)]), 1_000_000, 20260818)
            .unwrap();
    let mc = mc_rep.mc.expect("rank-one compact factor should trigger the sphere check");
    assert!(
        mc.within_tolerance,
        "MC estimate {} vs target {} (rel err {})",
        mc.estimate, mc.target, mc.rel_error
    );
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "budget blown: {elapsed:?}");
    println!(
        "ACCEPTANCE 11: PASS - dim chain exact on {} sp(4,R) + {} su(2,1) points; MC rel err {:.4} ({} ms)",
        grid,
        admissible,
        mc.rel_error,
        elapsed.as_millis()
    );
}

#[test]
fn acceptance_12_z0_h_chain() {
    for name in HERMITIAN {
        let c = ctx(name);
        let alg = &c.form.algebra;
        let croots = c.croots.as_ref().unwrap();
        let z0 = croots.z0_vector().expect("Hermitian algebra must carry Z0");

        // Z0 is central in k and acts as the complex structure on p;
        // together with the orientation fixed by the positive system this
        // pins it down, and a rebuild reproduces it bit for bit.
        for b in c.form.k.basis() {
            assert!(
                alg.bracket(&z0, b).iter().all(|x| x.is_zero()),
                "{name}: Z0 not central in k"
            );
        }
        for b in c.form.p.basis() {
            let twice = alg.bracket(&z0, &alg.bracket(&z0, b));
            let neg: Vec<Rational> = b.iter().map(|x| -x.clone()).collect();
            assert_eq!(twice, neg, "{name}: ad(Z0)^2 != -id on p");
        }
        let rebuilt = analyze(&c.spec).unwrap();
        assert_eq!(
            rebuilt.croots.as_ref().unwrap().z0_vector(),
            Some(z0.clone()),
            "{name}: Z0 not deterministic"
        );

        let engine = c.engine().unwrap();
        let h = h_covector(&engine).unwrap();
        assert!(
            engine.frame.is_open_orbit_point(&h).unwrap(),
            "{name}: h is not an open orbit point"
        );
    }
    println!("ACCEPTANCE 12: PASS - Z0 characterized and reproducible; h lies in an open orbit");
}
