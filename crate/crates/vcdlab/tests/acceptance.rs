//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them). Expected values and tolerances are
//! pinned in the assertions themselves.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vcdlab::applications::{
    crafted_helly_triple, epsilon_net_sample, fractional_helly_check, halfplane_circles_triple,
    in_p, mv_kernel_split, random_circles_triple,
};
use vcdlab::arrangements::{
    binomial, enumerate_realizable_patterns, gen_generic_hyperplanes, gen_pencil_instance,
    GridInstance, PencilTestPoint,
};
use vcdlab::cohomology::{cohomology_space, restriction_kernel};
use vcdlab::exactq::Rational;
use vcdlab::vcdensity::{fit_vcd_slope, higher_order_pattern_count, kernel_set, SetSystem};

fn report(id: usize, name: &str, pass: bool, detail: &str, elapsed: Duration, budget_s: u64) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {id} ({name}): {verdict} [{elapsed:.2?}] — {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
    assert!(
        elapsed < Duration::from_secs(budget_s),
        "criterion {id} exceeded its {budget_s}s budget: {elapsed:?}"
    );
}

#[test]
fn criterion_01_hyperplane_pattern_counts() {
    let start = Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for m in 1..=3usize {
        for count in 3..=12usize {
            let seed = 1_000 + 100 * m as u64 + count as u64;
            let family = gen_generic_hyperplanes(m, count, seed).expect("generation");
            let got = enumerate_realizable_patterns(&family).len() as u128;
            let expected: u128 = (0..=m).map(|i| binomial(count, i)).sum();
            if got != expected {
                pass = false;
                detail = format!("m={m} count={count}: got {got}, expected {expected}");
            }
        }
    }
    if pass {
        detail = "pattern counts equal sum of binomials for m in 1..=3, sizes 3..=12 \
                  (e.g. m=2, 5 lines -> 16)"
            .into();
    }
    report(
        1,
        "hyperplane pattern counts",
        pass,
        &detail,
        start.elapsed(),
        30,
    );
}

#[test]
fn criterion_02_grid_betti_numbers() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 2..=20usize {
        let g = GridInstance::generate(n).expect("grid");
        let betti = cohomology_space(g.complex(), 1)
            .expect("cohomology")
            .quotient_dim();
        if betti != (n - 1) * (n - 1) {
            pass = false;
            detail = format!("n={n}: dim H^1 = {betti}, expected {}", (n - 1) * (n - 1));
            break;
        }
    }
    if pass {
        detail = "dim H^1(grid) = (n-1)^2 for all n in 2..=20".into();
    }
    report(2, "grid Betti numbers", pass, &detail, start.elapsed(), 60);
}

#[test]
fn criterion_03_grid_sweep_kernel_spectrum() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 2..=8usize {
        let g = GridInstance::generate(n).expect("grid");
        let subs = g.sweep_subcomplexes();
        let ks = kernel_set(g.complex(), &subs, 1).expect("kernel set");
        let want: BTreeSet<usize> = (0..=(n - 1) * (n - 1)).collect();
        if ks.dimension_set() != want {
            pass = false;
            detail = format!(
                "n={n}: kernel dims {:?} != 0..={}",
                ks.dimension_set(),
                (n - 1) * (n - 1)
            );
            break;
        }
        if ks.len() < (n - 1) * (n - 1) + 1 {
            pass = false;
            detail = format!("n={n}: only {} distinct kernels", ks.len());
            break;
        }
    }
    if pass {
        detail = "kernel dimensions over the sweep equal {0..(n-1)^2} and distinct kernels \
                  >= (n-1)^2+1 for n in 2..=8"
            .into();
    }
    report(
        3,
        "grid sweep kernel spectrum",
        pass,
        &detail,
        start.elapsed(),
        120,
    );
}

#[test]
fn criterion_04_grid_vcd_slope() {
    let start = Instant::now();
    // Exact distinct-kernel counts per n; the fast counter is cross-checked
    // against the canonical-subspace count on the small instances here.
    let mut points = Vec::new();
    let mut cross_check_ok = true;
    for n in 4..=16usize {
        let g = GridInstance::generate(n).expect("grid");
        let count = g.sweep_distinct_kernel_count();
        if n <= 6 {
            let ks = kernel_set(g.complex(), &g.sweep_subcomplexes(), 1).expect("kernel set");
            if ks.len() != count {
                cross_check_ok = false;
            }
        }
        points.push((n, count));
    }
    let fit = fit_vcd_slope(&points).expect("fit");
    let in_window = fit.slope >= 1.7 && fit.slope <= 2.05;
    let pass = in_window && cross_check_ok;
    let detail = format!(
        "slope {:.4} over n in 4..=16 vs required [1.7, 2.05]; counts are exactly \
         (n-1)^2+1 (nested sweep kernels are distinct iff their dimensions differ), and \
         log((n-1)^2+1)/log(n) approaches the bound 2 from above, so the window top 2.05 \
         is not attainable at these sizes; r^2 = {:.6}, counts {:?}",
        fit.slope, fit.r_squared, points
    );
    report(
        4,
        "grid degree-1 density slope",
        pass,
        &detail,
        start.elapsed(),
        600,
    );
}

#[test]
fn criterion_05_pencil_distinct_kernels() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 2..=8usize {
        let inst = gen_pencil_instance(n, 500 + n as u64).expect("pencil");
        let parent = inst.incidence_graph();
        let space = cohomology_space(parent, 1).expect("cohomology");
        let mut kernels = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let fiber = inst.fiber(&PencilTestPoint::Pair(i, j));
                kernels.push(restriction_kernel(parent, &space, fiber).expect("kernel"));
            }
        }
        let generic = restriction_kernel(parent, &space, inst.fiber(&PencilTestPoint::Generic))
            .expect("kernel");
        for a in 0..kernels.len() {
            if kernels[a] == generic {
                pass = false;
                detail = format!("n={n}: pair kernel {a} equals the generic kernel");
            }
            for b in a + 1..kernels.len() {
                if kernels[a] == kernels[b] {
                    pass = false;
                    detail = format!("n={n}: pair kernels {a} and {b} coincide");
                }
            }
        }
        let mut distinct: BTreeSet<_> = kernels.iter().cloned().collect();
        distinct.insert(generic);
        if distinct.len() < n * (n - 1) / 2 + 1 {
            pass = false;
            detail = format!("n={n}: only {} distinct kernels", distinct.len());
        }
        if !pass {
            break;
        }
    }
    if pass {
        detail = "all C(n,2) pair kernels pairwise distinct and distinct from the generic \
                  kernel for n in 2..=8"
            .into();
    }
    report(
        5,
        "pencil kernel distinctness",
        pass,
        &detail,
        start.elapsed(),
        300,
    );
}

#[test]
fn criterion_06_sauer_shelah() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2_024);
    let mut pass = true;
    let mut detail = String::new();
    for case in 0..200usize {
        let ground = rng.gen_range(4..=16usize);
        let nsets = rng.gen_range(1..=20usize);
        let mask = if ground == 64 {
            u64::MAX
        } else {
            (1u64 << ground) - 1
        };
        let sets: Vec<u64> = (0..nsets).map(|_| rng.gen::<u64>() & mask).collect();
        let system = SetSystem::new(ground, sets).expect("system");
        let d = system.vc_dimension().expect("vc dimension");
        if !sauer_shelah_ok(&system, d) {
            pass = false;
            detail = format!("case {case}: bound violated at ground {ground}, d {d}");
            break;
        }
    }
    if pass {
        detail = "nu(n) <= sum_i C(n,i) for brute-force VC dimension on 200 random systems".into();
    }
    report(6, "Sauer-Shelah bound", pass, &detail, start.elapsed(), 120);
}

fn sauer_shelah_ok(system: &SetSystem, d: usize) -> bool {
    vcdlab::vcdensity::sauer_shelah_check(system, d).expect("check")
}

#[test]
fn criterion_07_mayer_vietoris_splitting() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for case in 0..100usize {
        let n = 3 + case % 8;
        let t = random_circles_triple(n, 1, 3_000 + case as u64).expect("triple");
        let split = mv_kernel_split(&t, 0, 1).expect("preconditions hold for disjoint circles");
        // Independent recovery: evaluate membership directly per member.
        let direct: Vec<bool> = (0..n)
            .map(|zi| in_p(t.ambient(), &t.members()[zi], &t.tests()[0].caps[zi], 1).unwrap())
            .collect();
        if !split.agrees || split.recovered != direct {
            pass = false;
            detail = format!(
                "case {case} (n={n}): agrees={} recovered mismatch",
                split.agrees
            );
            break;
        }
    }
    if pass {
        detail = "kernel splits as the direct sum and recovers membership in 100/100 \
                  randomized disjoint-circle triples"
            .into();
    }
    report(
        7,
        "Mayer-Vietoris splitting",
        pass,
        &detail,
        start.elapsed(),
        120,
    );
}

#[test]
fn criterion_08_epsilon_net() {
    let start = Instant::now();
    let t = halfplane_circles_triple(40).expect("triple");
    // Calibration used throughout: C = 2 with density bound d = 2, giving
    // nets of size ceil(2 * 2 * 4 * ln 4) = 23 out of 40.
    let outcome = epsilon_net_sample(
        &t,
        1,
        &Rational::new(1, 4),
        &Rational::new(2, 1),
        2,
        200,
        777,
    )
    .expect("net sampling");
    let pass = outcome.success_rate >= 0.9;
    let detail = format!(
        "success rate {:.3} over {} trials with net size {} (required >= 0.9)",
        outcome.success_rate, outcome.trials, outcome.net_size
    );
    report(
        8,
        "degree-1 epsilon net",
        pass,
        &detail,
        start.elapsed(),
        180,
    );
}

#[test]
fn criterion_09_fractional_helly() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for case in 0..20usize {
        let n_plus_1 = 8 + case % 5;
        let t = crafted_helly_triple(n_plus_1, 6, 4_000 + case as u64).expect("triple");
        let out = fractional_helly_check(&t, 1, 2, &Rational::new(1, 2)).expect("check");
        if !out.hypothesis_holds || out.beta_achieved <= Rational::zero() {
            pass = false;
            detail = format!(
                "case {case} (n+1={n_plus_1}): hypothesis={} beta={}",
                out.hypothesis_holds, out.beta_achieved
            );
            break;
        }
    }
    if pass {
        detail = "hypothesis satisfied and beta_achieved > 0 on all 20 crafted instances \
                  (k=2, alpha=1/2)"
            .into();
    }
    report(9, "fractional Helly", pass, &detail, start.elapsed(), 120);
}

#[test]
fn criterion_10_higher_order_patterns() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();

    // Random rectangle-union cut families on the 6x6 grid against an
    // independent set-of-sets oracle that evaluates membership pointwise.
    let mut rng = ChaCha8Rng::seed_from_u64(6_006);
    for case in 0..10usize {
        let rects: Vec<[usize; 8]> = (0..rng.gen_range(4..=12))
            .map(|_| {
                let mut r = [0usize; 8];
                for half in 0..2 {
                    let a = rng.gen_range(0..6);
                    let b = rng.gen_range(a..6);
                    let c = rng.gen_range(0..6);
                    let d = rng.gen_range(c..6);
                    r[4 * half..4 * half + 4].copy_from_slice(&[a, b, c, d]);
                }
                r
            })
            .collect();
        let member = |r: &[usize; 8], x: usize, y: usize| {
            (r[0] <= x && x <= r[1] && r[2] <= y && y <= r[3])
                || (r[4] <= x && x <= r[5] && r[6] <= y && y <= r[7])
        };
        let z: Vec<usize> = (0..6).collect();
        let cuts: Vec<BTreeSet<(usize, usize)>> = rects
            .iter()
            .map(|r| {
                (0..6)
                    .flat_map(|x| (0..6).map(move |y| (x, y)))
                    .filter(|&(x, y)| member(r, x, y))
                    .collect()
            })
            .collect();
        let got = higher_order_pattern_count(&z, &z, &cuts);
        // Oracle: realize each trace pointwise from the rectangle data.
        let oracle: BTreeSet<BTreeSet<(usize, usize)>> = rects
            .iter()
            .map(|r| {
                z.iter()
                    .flat_map(|&x| z.iter().map(move |&y| (x, y)))
                    .filter(|&(x, y)| member(r, x, y))
                    .collect()
            })
            .collect();
        if got != oracle.len() {
            pass = false;
            detail = format!("case {case}: {got} != oracle {}", oracle.len());
            break;
        }
    }

    // Product family of all nonempty rectangles on the 8x8 carrier: slope of
    // the trace counts over n in 3..=8 against the order-2 bound with
    // dim X = 4 (rectangle corner parameters).
    if pass {
        let carrier = 8usize;
        let mut cuts: Vec<BTreeSet<(usize, usize)>> = Vec::new();
        for a in 0..carrier {
            for b in a..carrier {
                for c in 0..carrier {
                    for d in c..carrier {
                        cuts.push((a..=b).flat_map(|x| (c..=d).map(move |y| (x, y))).collect());
                    }
                }
            }
        }
        let mut points = Vec::new();
        for n in 3..=8usize {
            let sub: Vec<usize> = (0..n).collect();
            let count = higher_order_pattern_count(&sub, &sub, &cuts);
            let intervals = n * (n + 1) / 2;
            let expected = intervals * intervals + usize::from(n < carrier);
            if count != expected {
                pass = false;
                detail = format!("product family n={n}: {count} != {expected}");
                break;
            }
            points.push((n, count));
        }
        if pass {
            let fit = fit_vcd_slope(&points).expect("fit");
            let bound = 2.1 * 4.0;
            if fit.slope > bound {
                pass = false;
                detail = format!("slope {:.3} exceeds {bound}", fit.slope);
            } else {
                detail = format!(
                    "oracle agreement on 10 random 6x6 families; product-family slope {:.3} \
                     <= {bound}",
                    fit.slope
                );
            }
        }
    }
    report(
        10,
        "order-2 pattern counts",
        pass,
        &detail,
        start.elapsed(),
        180,
    );
}
