//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and fails if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use cfcomm::chip::{canonical_layout, compile, mesh_unitary, simulate_tomography, verify};
use cfcomm::histories::{amplitude_by_paths, counterfactuality_report, enumerate};
use cfcomm::protocol::{closed_form, run, BobAction, ProtocolConfig};
use cfcomm::Mode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cfg(k: usize, delta: f64, bob: BobAction) -> ProtocolConfig {
    ProtocolConfig::new(k, delta, bob).expect("valid config")
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cfcomm"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

const DELTAS: [f64; 4] = [0.0, 0.01, 0.1, 0.3];

fn evolution_fidelity() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=16 {
        for &delta in &DELTAS {
            for bob in [BobAction::Block, BobAction::Pass] {
                let c = cfg(k, delta, bob);
                let d = run(&c).1.max_abs_diff(&closed_form(&c).map_err(|e| e.to_string())?);
                worst = worst.max(d);
            }
        }
    }
    check(worst <= 1e-12, format!("max |run - closed_form| = {worst:e}"))?;
    Ok(format!("max |run - closed_form| = {worst:.1e} <= 1e-12"))
}

fn normalization() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=16 {
        for &delta in &DELTAS {
            for bob in [BobAction::Block, BobAction::Pass, BobAction::Splitter(FRAC_PI_4)] {
                for fb in [false, true] {
                    let c = cfg(k, delta, bob).with_final_block(fb);
                    worst = worst.max((run(&c).1.total() - 1.0).abs());
                    if !fb && bob != BobAction::Splitter(FRAC_PI_4) {
                        let cf = closed_form(&c).map_err(|e| e.to_string())?;
                        worst = worst.max((cf.total() - 1.0).abs());
                    }
                }
            }
        }
    }
    check(worst <= 1e-12, format!("max |sum - 1| = {worst:e}"))?;
    Ok(format!("max |sum - 1| = {worst:.1e} <= 1e-12"))
}

fn zeno_limit() -> Outcome {
    let p_d1 = |k: usize| run(&cfg(k, 0.0, BobAction::Block)).1.p_d1;
    let formula = |k: usize| (PI / (2.0 * k as f64)).cos().powi(2 * k as i32);
    let values: Vec<f64> = (2..=64).map(p_d1).collect();
    for (i, w) in values.windows(2).enumerate() {
        check(w[1] > w[0], format!("not increasing at K = {}", i + 3))?;
    }
    for k in 2..=64 {
        check((p_d1(k) - formula(k)).abs() <= 1e-12, format!("run != formula at K = {k}"))?;
    }
    let at64 = p_d1(64);
    check(at64 > 0.96, format!("p_D1(64) = {at64}"))?;
    // cos^8(pi/8) evaluated directly
    let spot = p_d1(4);
    let oracle = 0.5307900;
    check((spot - oracle).abs() <= 1e-6, format!("p_D1(4) = {spot}"))?;
    check((formula(4) - oracle).abs() <= 1e-6, "formula oracle drifted")?;
    Ok(format!("monotone K=2..64, p_D1(64) = {at64:.6} > 0.96, p_D1(4) = {spot:.7}"))
}

fn path_sum_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut configs = 0;
    for k in 1..=8 {
        for delta in [0.0, 0.1] {
            for bob in [BobAction::Block, BobAction::Pass, BobAction::Splitter(FRAC_PI_4)] {
                let c = cfg(k, delta, bob);
                let (state, _) = run(&c);
                let hs = enumerate(&c).map_err(|e| e.to_string())?;
                for m in c.basis().labels() {
                    let d = (amplitude_by_paths(&hs, m) - state.amplitude(m).unwrap()).norm();
                    worst = worst.max(d);
                }
                configs += 1;
            }
        }
    }
    check(worst <= 1e-10, format!("max amplitude mismatch {worst:e}"))?;
    Ok(format!("{configs} configs, max |paths - state| = {worst:.1e} <= 1e-10"))
}

fn counterfactuality() -> Outcome {
    for k in 1..=8 {
        for fb in [false, true] {
            for delta in [0.0, 0.1] {
                let block = cfg(k, delta, BobAction::Block).with_final_block(fb);
                let r = counterfactuality_report(&block, Mode::B).map_err(|e| e.to_string())?;
                check(r.c_visiting_paths == 0, format!("Block K={k} fb={fb}: C-visiting paths end at B"))?;
                let pass = cfg(k, delta, BobAction::Pass).with_final_block(fb);
                let r = counterfactuality_report(&pass, Mode::A).map_err(|e| e.to_string())?;
                check(r.c_visiting_paths == 0, format!("Pass K={k} fb={fb}: C-visiting paths end at A"))?;
            }
            let fb_flag: &[&str] = if fb { &["--final-block"] } else { &[] };
            let ks = k.to_string();
            let mut a = vec!["trace", "--k", &ks, "--bob", "block", "--outcome", "B"];
            a.extend_from_slice(fb_flag);
            let (code, _) = cli(&a);
            check(code == 0, format!("trace block K={k} outcome B exited {code}"))?;
            let mut a = vec!["trace", "--k", &ks, "--bob", "pass", "--outcome", "A"];
            a.extend_from_slice(fb_flag);
            let (code, _) = cli(&a);
            check(code == 0, format!("trace pass K={k} outcome A exited {code}"))?;
        }
    }
    let (code, _) = cli(&["trace", "--k", "2", "--bob", "pass", "--outcome", "B"]);
    check(code == 3, format!("destructive-interference control exited {code}, expected 3"))?;
    Ok("no C-visiting history reaches B (Block) or A (Pass), K=1..8; control exits 3".into())
}

fn chip_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=6 {
        for delta in [0.0, 0.1] {
            for bob in [BobAction::Block, BobAction::Pass, BobAction::Splitter(FRAC_PI_4)] {
                let c = cfg(k, delta, bob);
                let prog = compile(&c, &canonical_layout(k).unwrap()).map_err(|e| e.to_string())?;
                let u = mesh_unitary(&prog).map_err(|e| e.to_string())?;
                let r = verify(&u, &c, 1e-9).map_err(|e| e.to_string())?;
                check(r.equivalent, format!("K={k} delta={delta} {bob}: residual {:e}", r.residual))?;
                worst = worst.max(r.residual);
            }
        }
    }
    Ok(format!("max residual {worst:.1e} <= 1e-9"))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn tomography() -> Outcome {
    let sup = cfg(2, 0.2, BobAction::Splitter(FRAC_PI_4));
    let analytic = simulate_tomography(&sup, 0, 0).map_err(|e| e.to_string())?;
    check(analytic.trace_distance <= 1e-10, format!("analytic {:e}", analytic.trace_distance))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let bob = match rng.gen_range(0..3) {
            0 => BobAction::Block,
            1 => BobAction::Pass,
            _ => BobAction::Splitter(rng.gen_range(0.0..FRAC_PI_2)),
        };
        let c = cfg(rng.gen_range(1..=6), rng.gen_range(0.05..0.6), bob);
        let r = simulate_tomography(&c, 0, 0).map_err(|e| e.to_string())?;
        check(r.trace_distance <= 1e-10, format!("analytic {c:?}: {:e}", r.trace_distance))?;
    }

    let seeds = 0..20u64;
    let td = |shots: u64, seed: u64| {
        simulate_tomography(&sup, shots, seed).map(|r| r.trace_distance).map_err(|e| e.to_string())
    };
    let big: Vec<f64> = seeds.clone().map(|s| td(1_000_000, s)).collect::<Result<_, _>>()?;
    let small: Vec<f64> = seeds.map(|s| td(10_000, s)).collect::<Result<_, _>>()?;
    let within = big.iter().filter(|&&d| d <= 0.01).count();
    check(within >= 18, format!("only {within}/20 seeds within 0.01 at 1e6 shots"))?;
    let (m_small, m_big) = (median(small), median(big));
    check(m_small >= 3.0 * m_big, format!("median ratio {:.2} < 3", m_small / m_big))?;
    Ok(format!(
        "analytic {:.1e}; {within}/20 seeds <= 0.01 at 1e6; median 1e4/1e6 = {m_small:.4}/{m_big:.4} = {:.1}x",
        analytic.trace_distance,
        m_small / m_big
    ))
}

fn determinism() -> Outcome {
    let invocations: [&[&str]; 5] = [
        &["run", "--k", "4", "--delta", "0.1", "--bob", "block"],
        &["sweep", "--k", "1:16", "--delta", "0:0.3:0.1", "--bob", "split:0.7854"],
        &["trace", "--k", "4", "--bob", "block", "--outcome", "B"],
        &["chip", "--k", "4", "--bob", "block"],
        &["tomo", "--k", "2", "--delta", "0.2", "--bob", "split:0.7854", "--shots", "20000", "--seed", "7"],
    ];
    for args in invocations {
        let first = cli(args);
        let second = cli(args);
        check(first.0 == 0, format!("{args:?} exited {}", first.0))?;
        check(!first.1.is_empty() && first == second, format!("{args:?} output differs"))?;
    }
    Ok("run, sweep, trace, chip, tomo byte-identical across two invocations".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 evolution fidelity", evolution_fidelity, Duration::from_secs(1)),
        ("2 normalization", normalization, Duration::from_secs(1)),
        ("3 Zeno limit", zeno_limit, Duration::from_secs(1)),
        ("4 path-sum oracle", path_sum_oracle, Duration::from_secs(30)),
        ("5 counterfactuality", counterfactuality, Duration::from_secs(30)),
        ("6 chip equivalence", chip_equivalence, Duration::from_secs(5)),
        ("7 tomography", tomography, Duration::from_secs(60)),
        ("8 determinism", determinism, Duration::MAX),
    ];
    let mut failed = Vec::new();
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > budget {
            outcome = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        match outcome {
            Ok(msg) => println!("[PASS] {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                println!("[FAIL] {name}: {msg} ({elapsed:.2?})");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
