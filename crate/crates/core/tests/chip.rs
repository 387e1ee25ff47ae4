use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use cfcomm::chip::{
    canonical_layout, compile, compile_with, mesh_unitary, mzi_transfer, simulate_tomography,
    verify, CompileOptions, Role,
};
use cfcomm::protocol::{BobAction, ProtocolConfig};
use nalgebra::Matrix2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bobs() -> [BobAction; 3] {
    [BobAction::Pass, BobAction::Block, BobAction::Splitter(FRAC_PI_4)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mzi_is_unitary(theta in -10.0f64..10.0, phi in -10.0f64..10.0) {
        let t = mzi_transfer(theta, phi);
        let err = (t.adjoint() * t - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }
}

#[test]
fn compiled_programs_verify() {
    for k in 1..=6 {
        for delta in [0.0, 0.1] {
            for bob in bobs() {
                for fb in [false, true] {
                    let c = ProtocolConfig::new(k, delta, bob).unwrap().with_final_block(fb);
                    let prog = compile(&c, &canonical_layout(k).unwrap()).unwrap();
                    prog.validate().unwrap();
                    let u = mesh_unitary(&prog).unwrap();
                    assert!(u.unitarity_error() <= 1e-12);
                    let r = verify(&u, &c, 1e-9).unwrap();
                    assert!(r.equivalent, "K={k} delta={delta} {bob} fb={fb}: {}", r.residual);
                    assert_eq!(r.output_phases[0], r.output_phases[1]);
                }
            }
        }
    }
}

#[test]
fn forced_routers_are_self_inverse() {
    for k in 1..=6 {
        let c = ProtocolConfig::new(k, 0.1, BobAction::Pass).unwrap();
        let layout = canonical_layout(k).unwrap();
        let forced = compile_with(&c, &layout, CompileOptions { force_bob_stage: true }).unwrap();
        assert_eq!(forced.count_role(Role::Blocker), k - 1);
        let r = verify(&mesh_unitary(&forced).unwrap(), &c, 1e-9).unwrap();
        assert!(r.residual <= 1e-9, "K={k}: {}", r.residual);
    }
}

#[test]
fn splitter_blocker_angle_on_chip() {
    let c = ProtocolConfig::new(3, 0.0, BobAction::Splitter(FRAC_PI_2)).unwrap();
    let prog = compile(&c, &canonical_layout(3).unwrap()).unwrap();
    for m in prog.mzis().filter(|m| m.role == Role::Blocker) {
        // full rotation into the loss mode is the cross state
        assert!(m.theta.abs() < 1e-12);
    }
}

#[test]
fn analytic_tomography_random_configs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let k = rng.gen_range(1..=6);
        let delta = rng.gen_range(0.05..0.6);
        let bob = match rng.gen_range(0..3) {
            0 => BobAction::Block,
            1 => BobAction::Pass,
            _ => BobAction::Splitter(rng.gen_range(0.0..FRAC_PI_2)),
        };
        let fb = rng.gen_bool(0.5);
        let c = ProtocolConfig::new(k, delta, bob).unwrap().with_final_block(fb);
        let r = simulate_tomography(&c, 0, 0).unwrap();
        assert!(r.trace_distance <= 1e-10, "{c:?}: {}", r.trace_distance);
    }
}
