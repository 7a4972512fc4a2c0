//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Run with `cargo test --test acceptance`.

use std::time::{Duration, Instant};

use besov_pick::kernels::{
    complete_pick_gram, inclusion_descent_check, level_psd_scale, search_pick_refutation,
    KernelSpec, PointSet, Verdict, DEFAULT_RADIUS,
};
use besov_pick::linalg::{CMatrix, HermitianMatrix};
use besov_pick::multops::{
    counterexample_report, d_contraction_check, mult_matrix, row_from_column_report,
    MultiplierTuple,
};
use besov_pick::oracle::{
    cross_validate, max_entry_deviation, mult_matrix_raw, quad_monomial_norm, QuadratureConfig,
};
use besov_pick::polyring::{monomials_up_to, parse_polynomial, Polynomial};
use besov_pick::spaces::{
    bergman_part, besov_shift_ratio, monomial_norm_da, RadialWeight, SpaceSpec,
};
use besov_pick::weakprod::{
    hankel_build, hankel_intertwine_check, rescale_to_equal_norm, smirnov_verify, square_split,
    wp_norm_upper, SmirnovWitness,
};
use besov_pick::Complex64;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn factorial(k: u32) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn c1_drury_arveson_exact() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for dim in 1..=4 {
        for alpha in monomials_up_to(dim, 10) {
            let num: BigInt = alpha.exponents().iter().map(|&a| factorial(a)).product();
            let expect = BigRational::new(num, factorial(alpha.degree()));
            let got = monomial_norm_da(&alpha);
            ensure(got == expect, || format!("{alpha:?}: {got} != {expect}"))?;
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{count} monomials exact in {:?}", start.elapsed()))
}

fn c2_counterexample() -> Check {
    let start = Instant::now();
    let pi_sq_6 = std::f64::consts::PI.powi(2) / 6.0;
    let mut detail = Vec::new();
    for n_max in [8u32, 16, 32] {
        let full = ok(counterexample_report(2, n_max, n_max + 1))?;
        let half = ok(counterexample_report(2, n_max / 2, 0))?;
        let growth = full.column_sq_lower - half.column_sq_lower;
        ensure(growth >= 2f64.ln() - 0.05, || {
            format!("n_max={n_max}: column growth {growth}")
        })?;
        let row_sq = full.row_upper_truncated.powi(2);
        ensure(row_sq <= full.row_sq_bound + 1e-8, || {
            format!("n_max={n_max}: row² {row_sq} > {}", full.row_sq_bound)
        })?;
        ensure(full.row_sq_bound <= pi_sq_6 + 1e-8, || {
            "partial sum above π²/6".into()
        })?;
        detail.push(format!("n={n_max}: Δcol²={growth:.3} row²={row_sq:.4}"));
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(detail.join(", "))
}

fn c3_d_contraction() -> Check {
    let mut worst = f64::INFINITY;
    let mut r = rng(3);
    for dim in [2usize, 3] {
        for _ in 0..100 {
            let fs: Vec<_> = (0..dim)
                .map(|_| Polynomial::random(&mut r, dim, 8))
                .collect();
            let slack = ok(d_contraction_check(&fs))?;
            worst = worst.min(slack);
            ensure(slack >= -1e-12, || format!("d={dim}: slack {slack}"))?;
        }
    }
    Ok(format!("200 tuples, min slack {worst:.3e}"))
}

fn c4_complete_pick() -> Check {
    let mut detail = Vec::new();
    let cases = [
        (KernelSpec::DruryArveson { dim: 2 }, 41),
        (KernelSpec::DruryArveson { dim: 3 }, 42),
        (KernelSpec::Szego, 43),
    ];
    for (k, seed) in cases {
        let dim = k.dim();
        let pts = ok(PointSet::random(dim, 30, DEFAULT_RADIUS, seed))?;
        let origin = vec![Complex64::default(); dim];
        let min = ok(complete_pick_gram(&k, &pts, &origin))?.min_eigenvalue();
        ensure(min >= -1e-10, || format!("{}: min eig {min}", k.label()))?;
        detail.push(format!("{} {min:.1e}", k.label()));
    }
    for dim in [2usize, 3] {
        let k = KernelSpec::Power {
            dim,
            beta: dim as f64 + 1.0,
        };
        let origin = vec![Complex64::default(); dim];
        let cert = ok(search_pick_refutation(&k, &origin, 10_000, 6, 1e-6, 4))?;
        ensure(
            cert.verdict == Verdict::Refuted && cert.min_eig < -1e-6,
            || format!("{} not refuted (min eig {})", k.label(), cert.min_eig),
        )?;
        detail.push(format!(
            "{} REFUTED after {} sets",
            k.label(),
            cert.sets_tried
        ));
    }
    Ok(detail.join(", "))
}

fn c5_schur_product() -> Check {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = 1 + trial % 12;
        let psd = |r: &mut ChaCha8Rng| {
            let k = 1 + trial % n;
            let x = CMatrix::from_fn(n, k, |_, _| {
                Complex64::new(StandardNormal.sample(r), StandardNormal.sample(r))
            });
            HermitianMatrix::new(&x * x.adjoint()).expect("Gram matrix is Hermitian")
        };
        let a = psd(&mut r);
        let b = psd(&mut r);
        let h = ok(a.schur_product(&b))?;
        let scale = a.spectral_norm() * b.spectral_norm();
        let rel = h.min_eigenvalue() / scale;
        worst = worst.min(rel);
        ensure(rel >= -1e-10, || {
            format!("order {n}: relative min eig {rel}")
        })?;
    }
    Ok(format!("100 pairs, worst relative min eig {worst:.1e}"))
}

fn c6_inclusion_descent() -> Check {
    let pts = ok(PointSet::random(2, 25, DEFAULT_RADIUS, 6))?;
    let mut r = rng(6);
    let mut worst = f64::INFINITY;
    for _ in 0..20 {
        let phi = Polynomial::random(&mut r, 2, 3);
        let c = ok(level_psd_scale(&phi, 2, 1.0, 1.0, &pts))?;
        let scaled = phi.scale_real(c);
        let (level, down) = ok(inclusion_descent_check(&scaled, 2, 1.0, 1.0, &pts))?;
        ensure(level >= 0.0, || {
            format!("level Gram not psd after scaling: {level}")
        })?;
        worst = worst.min(down);
        ensure(down >= -1e-8, || format!("descended min eig {down}"))?;
    }
    Ok(format!(
        "20 polynomials, worst descended min eig {worst:.2e}"
    ))
}

fn c7_trent_constant() -> Check {
    let space = ok(SpaceSpec::besov(1, 1.0, RadialWeight::One))?;
    let mut r = rng(7);
    let tuples: Vec<_> = (0..50)
        .map(|_| MultiplierTuple::random(&mut r, 1, 5, 4))
        .collect();
    let rep = ok(row_from_column_report(&space, &space, &tuples, 12))?;
    let bound = 18f64.sqrt() + 0.01;
    ensure(rep.ratios.len() == 50, || {
        format!("only {} usable samples", rep.ratios.len())
    })?;
    ensure(rep.empirical_c <= bound, || {
        format!("empirical c {} > {bound}", rep.empirical_c)
    })?;
    Ok(format!(
        "empirical c = {:.4} <= √18 + 0.01",
        rep.empirical_c
    ))
}

fn c8_besov_shift() -> Check {
    let mut detail = Vec::new();
    for (s, a) in [(1.0, 1.0), (0.5, 1.0)] {
        for dim in [1usize, 2] {
            let (lo, hi) = ok(besov_shift_ratio(s, a, dim, 40))?;
            let spread = hi / lo;
            ensure(lo > 0.0 && spread <= 10.0, || {
                format!("(s,a,d)=({s},{a},{dim}): spread {spread}")
            })?;
            // For a = 1 the ratio is n/(n+d+1) exactly.
            let d = dim as f64;
            let (elo, ehi) = (1.0 / (d + 2.0), 40.0 / (41.0 + d));
            ensure((lo - elo).abs() < 1e-10 && (hi - ehi).abs() < 1e-10, || {
                format!("(s,a,d)=({s},{a},{dim}): band [{lo},{hi}] vs [{elo},{ehi}]")
            })?;
            detail.push(format!("({s},{a},d={dim}) {spread:.2}"));
        }
    }
    Ok(format!("max/min: {}", detail.join(", ")))
}

fn c9_hankel_intertwining() -> Check {
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for dim in [1usize, 2] {
        let space = ok(SpaceSpec::drury_arveson(dim))?;
        for _ in 0..20 {
            let phi = Polynomial::random(&mut r, dim, 2);
            let b = Polynomial::random(&mut r, dim, 4);
            let h = ok(hankel_build(&space, &b, 4))?;
            let defect = ok(hankel_intertwine_check(&h, &phi, 2))?;
            worst = worst.max(defect);
            ensure(defect <= 1e-12, || format!("defect {defect}"))?;
        }
    }
    Ok(format!("40 pairs, max defect {worst:.1e}"))
}

fn c10_square_split() -> Check {
    let space = ok(SpaceSpec::drury_arveson(2))?;
    let mut r = rng(10);
    let (mut worst_res, mut worst_book) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let f = Polynomial::random(&mut r, 2, 4);
        let g = Polynomial::random(&mut r, 2, 4);
        let (f, g) = ok(rescale_to_equal_norm(&f, &g, &space))?;
        let split = ok(square_split(&f, &g, &space))?;
        let fg = ok(f.checked_mul(&g))?;
        let res = ok(space.norm(&ok(split.product().checked_sub(&fg))?))?;
        let book =
            (ok(wp_norm_upper(&space, &split))? - ok(space.norm(&f))? * ok(space.norm(&g))?).abs();
        worst_res = worst_res.max(res);
        worst_book = worst_book.max(book);
        ensure(res <= 1e-12, || format!("residual {res}"))?;
        ensure(book <= 1e-10, || format!("bookkeeping defect {book}"))?;
    }
    Ok(format!(
        "100 pairs, residual {worst_res:.1e}, bookkeeping {worst_book:.1e}"
    ))
}

fn c11_oracle_gates() -> Check {
    let weights = [
        RadialWeight::One,
        ok(RadialWeight::standard(1.0))?,
        ok(RadialWeight::standard(0.5))?,
        ok(RadialWeight::standard(2.0))?,
    ];
    let mut worst_quad = 0.0f64;
    for w in &weights {
        for dim in 1..=3 {
            for alpha in monomials_up_to(dim, 4) {
                let q = ok(quad_monomial_norm(w, &alpha, 64))?;
                let c = ok(bergman_part(w, &alpha))?;
                let rel = (q - c).abs() / c;
                worst_quad = worst_quad.max(rel);
                ensure(rel <= 5e-3, || {
                    format!("{} {alpha:?}: rel {rel}", w.kind_name())
                })?;
            }
        }
    }

    let mut worst_mat = 0.0f64;
    let mut r = rng(11);
    for dim in 1..=3 {
        let spaces = [
            ok(SpaceSpec::drury_arveson(dim))?,
            ok(SpaceSpec::besov(dim, 1.0, RadialWeight::One))?,
            ok(SpaceSpec::besov(dim, 0.5, ok(RadialWeight::standard(1.0))?))?,
        ];
        for sp in &spaces {
            let phi = Polynomial::random(&mut r, dim, 2);
            let raw = ok(mult_matrix_raw(sp, &phi, 4))?;
            let fast = ok(mult_matrix(sp, sp, &phi, 4))?.to_dense();
            let dev = max_entry_deviation(&raw, &fast);
            worst_mat = worst_mat.max(dev);
            ensure(dev <= 1e-11, || format!("{}: deviation {dev}", sp.label()))?;
        }
    }

    let cfg = QuadratureConfig {
        n_samples: 100_000,
        seed: 11,
        ..QuadratureConfig::default()
    };
    let mut worst_z = 0.0f64;
    let mut orth = 0;
    for w in &weights[..2] {
        for dim in [2usize, 3] {
            for rec in ok(cross_validate(dim, w, 2, &cfg))?
                .into_iter()
                .filter(|r| r.check.starts_with("orth"))
            {
                worst_z = worst_z.max(rec.z_score);
                orth += 1;
                ensure(rec.z_score <= 3.0, || {
                    format!(
                        "{} d={dim} {}: z = {}",
                        w.kind_name(),
                        rec.check,
                        rec.z_score
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "quad rel {worst_quad:.1e}, matrix dev {worst_mat:.1e}, {orth} orthogonality z <= {worst_z:.2}"
    ))
}

fn c12_smirnov() -> Check {
    let p = |s: &str| parse_polynomial(s, 2).map_err(|e| e.to_string());
    let space = ok(SpaceSpec::drury_arveson(2))?;
    let w = SmirnovWitness::at_origin(space, p("z2")?, p("(1 - 0.5 z1)^2 z2")?, p("0.5 z1")?);
    let grid = ok(PointSet::random(2, 20, DEFAULT_RADIUS, 12))?;
    let mut detail = Vec::new();
    for degree in [15u32, 20] {
        let rec = ok(smirnov_verify(&w, degree, &grid))?;
        ensure(rec.residual <= 1e-12, || {
            format!("D={degree}: residual {}", rec.residual)
        })?;
        ensure(rec.frac_bounds.len() == 3, || {
            "r sequence not applied".into()
        })?;
        for f in &rec.frac_bounds {
            ensure(
                f.contraction <= 1.0 + 1e-9 && f.bounded <= 2.0 + 1e-9,
                || {
                    format!(
                        "D={degree} r={}: bounds ({}, {})",
                        f.r, f.contraction, f.bounded
                    )
                },
            )?;
        }
        let (c, b) = rec.max_frac_bounds();
        detail.push(format!(
            "D={degree}: residual {:.0e}, max bounds ({c:.3}, {b:.3})",
            rec.residual
        ));
    }
    Ok(detail.join("; "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Drury-Arveson monomial norms exact", c1_drury_arveson_exact),
        (
            "counterexample: column diverges, row bounded",
            c2_counterexample,
        ),
        ("d-contraction", c3_d_contraction),
        ("complete-Pick certificates", c4_complete_pick),
        ("Schur product", c5_schur_product),
        ("inclusion descent", c6_inclusion_descent),
        ("row/column constant <= √18", c7_trent_constant),
        ("Besov index shift band", c8_besov_shift),
        ("Hankel intertwining", c9_hankel_intertwining),
        ("parallelogram square split", c10_square_split),
        ("oracle gates", c11_oracle_gates),
        ("Smirnov witness", c12_smirnov),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
