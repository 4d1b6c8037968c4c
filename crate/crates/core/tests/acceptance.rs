//! Acceptance gate. Runs every primary criterion at its stated tolerance and
//! prints one PASS / FAIL / SKIP line per criterion; exits nonzero on any FAIL.
//!
//! Benchmark files are looked up in `$NRRLS_DATA_DIR`, falling back to the
//! workspace `data/` directory.

mod common;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use common::{random_stream, rel, Oracle};
use nrrls::data::gen_gaussian_imbalanced;
use nrrls::eval::{g_mean, Algorithm, Confusion};
use nrrls::experiment::{cmd_bayes, cmd_bench, cmd_converge, cmd_run, BayesConfig, BenchConfig, RunConfig};
use nrrls::linalg::Mat;
use nrrls::model::{
    batch_ter_solve, ter_gradient, ter_objective, Hyperparams, Label, LabeledSample, NrRls, OneVsAll, Rls, Weighting,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const B: f64 = 1e-4;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn sizes(rng: &mut ChaCha8Rng, max_n: usize, max_d: usize) -> (usize, usize) {
    (rng.random_range(20..=max_n), rng.random_range(2..=max_d))
}

fn exactness() -> nrrls::Result<Verdict> {
    let ratios = [0.05, 0.25, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for k in 0..50 {
        let (n, d) = sizes(&mut rng, 500, 30);
        let stream = random_stream(100 + k as u64, n, d, ratios[k % 3]);
        let mut learner = NrRls::new(Hyperparams::new(d).with_b(B))?;
        let mut oracle = Oracle::new(d, B, true);
        for s in &stream {
            learner.step(s)?;
            oracle.push(s);
            worst = worst.max(rel(learner.coefficients(), &oracle.solve()));
        }
        let (neg, pos) = split(&stream, d)?;
        worst_oracle = worst_oracle.max(rel(&batch_ter_solve(&neg, &pos, B)?, &oracle.solve()));
    }
    Ok(verdict(
        worst <= 1e-6 && worst_oracle <= 1e-6,
        format!("max rel diff {worst:.3e} (library batch vs oracle {worst_oracle:.3e}), tol 1e-6"),
    ))
}

fn split(stream: &[LabeledSample], d: usize) -> nrrls::Result<(Mat, Mat)> {
    nrrls::model::batch::split_by_class(stream, d)
}

fn ls_reduction() -> nrrls::Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let (n, d) = sizes(&mut rng, 400, 20);
        let stream = random_stream(200 + k as u64, n, d, [0.1, 0.5, 1.0][k % 3]);
        let hp = Hyperparams::new(d).with_b(B).with_weighting(Weighting::FixedBalanced);
        let mut nr = NrRls::new(hp)?;
        let mut rls = Rls::new(hp)?;
        let mut oracle = Oracle::new(d, B, false);
        for s in &stream {
            nr.step(s)?;
            rls.step(s)?;
            oracle.push(s);
            let ls = oracle.solve();
            worst = worst
                .max(rel(nr.coefficients(), &ls))
                .max(rel(rls.coefficients(), &ls))
                .max(rel(nr.coefficients(), rls.coefficients()));
        }
    }
    Ok(verdict(worst <= 1e-6, format!("max pairwise rel diff {worst:.3e}, tol 1e-6")))
}

fn order_invariance() -> nrrls::Result<Verdict> {
    let mut worst = 0.0f64;
    for (seed, d, ratio) in [(300u64, 12, 0.2), (301, 25, 0.05), (302, 6, 1.0)] {
        let stream = random_stream(seed, 400, d, ratio);
        let run = |s: &[LabeledSample]| -> nrrls::Result<Vec<f64>> {
            let mut l = NrRls::new(Hyperparams::new(d).with_b(B))?;
            for x in s {
                l.step(x)?;
            }
            Ok(l.coefficients().to_vec())
        };
        let base = run(&stream)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let mut p = stream.clone();
            p.shuffle(&mut rng);
            worst = worst.max(rel(&run(&p)?, &base));
        }
    }
    Ok(verdict(worst <= 1e-6, format!("max rel diff over 3 x 20 permutations {worst:.3e}, tol 1e-6")))
}

fn gradient() -> nrrls::Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_opt = 0.0f64;
    for k in 0..10 {
        let (n, d) = sizes(&mut rng, 300, 20);
        let stream = random_stream(400 + k, n, d, [0.05, 0.25, 1.0][k as usize % 3]);
        let mut learner = NrRls::new(Hyperparams::new(d).with_b(B))?;
        let (mut neg, mut pos) = (Mat::with_cols(d), Mat::with_cols(d));
        for s in &stream {
            let w = learner.step(s)?.clone();
            match s.y {
                Label::Negative => neg.push_row(&s.x)?,
                Label::Positive => pos.push_row(&s.x)?,
            }
            let g = ter_gradient(&w, &neg, &pos, B)?;
            let j = ter_objective(&w, &neg, &pos, B)?;
            let inf = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst_opt = worst_opt.max(inf / (1.0 + j.abs()));
        }
    }

    let mut worst_fd = 0.0f64;
    let h = 1e-6;
    for _ in 0..100 {
        let d = rng.random_range(1..=8);
        let mk = |rng: &mut ChaCha8Rng, rows: usize| {
            Mat::from_row_major(rows, d, (0..rows * d).map(|_| rng.random_range(-2.0..2.0)).collect())
        };
        let n_neg = rng.random_range(1..20);
        let n_pos = rng.random_range(1..20);
        let (neg, pos) = (mk(&mut rng, n_neg), mk(&mut rng, n_pos));
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b = rng.random_range(1e-4..1.0);
        let g = ter_gradient(&w, &neg, &pos, b)?;
        let mut err = 0.0f64;
        for i in 0..d {
            let (mut wp, mut wm) = (w.clone(), w.clone());
            wp[i] += h;
            wm[i] -= h;
            let fd = (ter_objective(&wp, &neg, &pos, b)? - ter_objective(&wm, &neg, &pos, b)?) / (2.0 * h);
            err = err.max((fd - g[i]).abs());
        }
        let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        worst_fd = worst_fd.max(err / scale);
    }
    Ok(verdict(
        worst_opt <= 1e-6 && worst_fd <= 1e-5,
        format!("max |grad|inf/(1+|J|) {worst_opt:.3e} (tol 1e-6); finite-difference rel err {worst_fd:.3e} (tol 1e-5)"),
    ))
}

fn constant_time() -> nrrls::Result<Verdict> {
    let r = cmd_bench(&BenchConfig { n: 20_000, dim: 20, ..BenchConfig::default() })?;
    let batch = r.batch.expect("baseline enabled");
    let rerun = cmd_bench(&BenchConfig { n: 20_000, dim: 20, seed: 1, baseline: false, ..BenchConfig::default() })?;
    Ok(verdict(
        r.nrrls.ratio <= 1.5 && batch.ratio >= 5.0 && rerun.nrrls.ratio <= 1.5,
        format!(
            "nrrls decile ratio {:.3} (<= 1.5, seed 1: {:.3}); batch recompute ratio {:.2} (>= 5)",
            r.nrrls.ratio, rerun.nrrls.ratio, batch.ratio
        ),
    ))
}

fn data_dir() -> PathBuf {
    std::env::var_os("NRRLS_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

struct Benchmark {
    name: &'static str,
    file: &'static str,
    target: f64,
    label_column: Option<usize>,
    positive: &'static str,
    ignore: &'static [usize],
}

const BENCHMARKS: [Benchmark; 3] = [
    Benchmark { name: "Monks-3", file: "monks-3.train", target: 0.771, label_column: Some(0), positive: "1", ignore: &[7] },
    Benchmark { name: "Blood-transfusion", file: "transfusion.data", target: 0.685, label_column: None, positive: "1", ignore: &[] },
    Benchmark { name: "Sonar", file: "sonar.all-data", target: 0.729, label_column: None, positive: "M", ignore: &[] },
];

fn g_mean_reproduction() -> nrrls::Result<Verdict> {
    let out = tempfile::tempdir().expect("temp dir");
    let mut lines = Vec::new();
    let (mut ran, mut failed) = (0, 0);
    for bm in &BENCHMARKS {
        let path = data_dir().join(bm.file);
        if !path.exists() {
            lines.push(format!("{}: SKIP ({} not found)", bm.name, path.display()));
            continue;
        }
        let cfg = RunConfig {
            data: Some(path),
            label_column: bm.label_column,
            positive_label: bm.positive.into(),
            ignore_columns: bm.ignore.to_vec(),
            algo: Algorithm::TerBatch,
            out: out.path().join(bm.file),
            ..RunConfig::default()
        };
        let s = cmd_run(&cfg)?;
        let ok = (s.best_g_mean - bm.target).abs() <= 0.05;
        ran += 1;
        failed += (!ok) as usize;
        let per_order: Vec<String> = s.orders.iter().map(|o| format!("r{}={:.3}", o.order, o.g_mean_mean)).collect();
        lines.push(format!(
            "{}: {} best {:.3} at r={} vs {:.3} ({})",
            bm.name,
            if ok { "ok" } else { "off" },
            s.best_g_mean,
            s.best_order,
            bm.target,
            per_order.join(" ")
        ));
    }
    let detail = lines.join("; ");
    Ok(if failed > 0 {
        Verdict::Fail(detail)
    } else if ran < BENCHMARKS.len() {
        Verdict::Skip(format!("{ran}/{} datasets available; {detail}", BENCHMARKS.len()))
    } else {
        Verdict::Pass(detail)
    })
}

fn converge_overlay() -> nrrls::Result<Verdict> {
    let dir = tempfile::tempdir().expect("temp dir");
    let g = gen_gaussian_imbalanced(400, 0.15, 1.5, 8)?;
    let mut csv = String::new();
    for (i, y) in g.dataset.labels().iter().enumerate() {
        let r = g.dataset.row(i);
        let _ = writeln!(csv, "{},{},{}", r[0], r[1], y.as_i8());
    }
    let synth = dir.path().join("gaussian.csv");
    std::fs::write(&synth, csv).expect("write");

    let mut cases = vec![(synth.clone(), "1", 1usize), (synth, "1", 3)];
    let sonar = data_dir().join("sonar.all-data");
    if sonar.exists() {
        cases.push((sonar, "M", 1));
    }
    let mut worst = 0.0f64;
    let mut same = true;
    let mut names = Vec::new();
    for (k, (path, positive, order)) in cases.into_iter().enumerate() {
        let cfg = RunConfig {
            data: Some(path.clone()),
            positive_label: positive.into(),
            orders: vec![order],
            out: dir.path().join(format!("c{k}")),
            ..RunConfig::default()
        };
        let r = cmd_converge(&cfg)?;
        worst = worst.max(r.max_rel_diff);
        same &= r.final_g_mean_nrrls == r.final_g_mean_batch;
        names.push(format!("{} r={} d={}", r.dataset, order, r.dim));
    }
    Ok(verdict(
        worst <= 1e-6 && same,
        format!("max rel diff {worst:.3e} (tol 1e-6), final G-means identical: {same} [{}]", names.join(", ")),
    ))
}

fn bayes() -> nrrls::Result<Verdict> {
    let mut sum = 0.0;
    for seed in 0..5 {
        sum += cmd_bayes(&BayesConfig { n: 5000, ratio: 0.25, seed, ..BayesConfig::default() })?.agreement;
    }
    let mean = sum / 5.0;
    Ok(verdict(mean >= 0.97, format!("mean agreement over 5 seeds {mean:.4} (>= 0.97)")))
}

fn multiclass() -> nrrls::Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let d = 4;
    let hp = Hyperparams::new(d).with_b(B);
    let mut ova = OneVsAll::new(3, hp)?;
    let mut single: Vec<NrRls> = (0..3).map(|_| NrRls::new(hp)).collect::<nrrls::Result<_>>()?;
    let mut worst = 0.0f64;
    for _ in 0..600 {
        let class = [0, 0, 0, 1, 1, 2][rng.random_range(0..6)];
        let mut x = vec![1.0];
        for j in 1..d {
            x.push(rng.random::<f64>() + if j == class + 1 { 0.8 } else { 0.0 });
        }
        ova.step(&x, class)?;
        for (c, l) in single.iter_mut().enumerate() {
            l.update(&x, if c == class { Label::Positive } else { Label::Negative })?;
        }
        let theta = ova.theta();
        for (c, l) in single.iter().enumerate() {
            let col: Vec<f64> = (0..d).map(|i| theta[(i, c)]).collect();
            worst = worst.max(rel(&col, l.coefficients()));
        }
    }
    Ok(verdict(worst <= 1e-6, format!("max column rel diff {worst:.3e}, tol 1e-6")))
}

fn g_mean_units() -> nrrls::Result<Verdict> {
    let perfect = g_mean(&Confusion::new(5, 0, 7, 0));
    let zero = g_mean(&Confusion::new(0, 4, 6, 1));
    let mixed = g_mean(&Confusion::new(3, 1, 4, 1));
    let expect = (0.75f64 * 0.8).sqrt();
    let ok = (perfect - 1.0).abs() <= 1e-12 && zero.abs() <= 1e-12 && (mixed - expect).abs() <= 1e-12;
    Ok(verdict(ok, format!("{perfect}, {zero}, {mixed:.16}")))
}

type Check = fn() -> nrrls::Result<Verdict>;

fn main() {
    let checks: [(&str, Check); 10] = [
        ("exactness", exactness),
        ("ls-reduction", ls_reduction),
        ("order-invariance", order_invariance),
        ("gradient-optimality", gradient),
        ("constant-time", constant_time),
        ("g-mean-reproduction", g_mean_reproduction),
        ("trajectory-overlay", converge_overlay),
        ("weighted-bayes", bayes),
        ("multiclass-consistency", multiclass),
        ("g-mean-units", g_mean_units),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(Verdict::Pass(d)) => ("PASS", d),
            Ok(Verdict::Skip(d)) => ("SKIP", d),
            Ok(Verdict::Fail(d)) => ("FAIL", d),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        failures += (tag == "FAIL") as usize;
        println!("{tag} {name} [{:.1}s] {detail}", start.elapsed().as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
