use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use nalgebra::Vector3;
use proptest::prelude::*;

use super::*;
use crate::angle::rad;

fn state(eta: [f64; 3], nu: [f64; 3]) -> VehicleState {
    VehicleState::new(Vector3::from(eta), Vector3::from(nu))
}

fn model() -> SimplifiedModel {
    SimplifiedModel::from_params(&VehicleParams::default())
}

// Scalar re-derivation of the model-based law, written out row by row with
// no matrix helpers.
struct Oracle {
    m: [f64; 3],
    d: [f64; 3],
}

impl Oracle {
    fn new() -> Self {
        let p = VehicleParams::default();
        Self {
            m: [p.mass_kg - p.added_mass.x_udot, p.mass_kg - p.added_mass.y_vdot, p.yaw_inertia_kgm2 - p.added_mass.n_rdot],
            d: [p.linear_drag.x_u, p.linear_drag.y_v, p.linear_drag.n_r],
        }
    }

    fn jt(psi: f64, a: [f64; 3]) -> [f64; 3] {
        let (s, c) = (psi.sin(), psi.cos());
        [c * a[0] + s * a[1], -s * a[0] + c * a[1], a[2]]
    }

    fn jdot_t(psi: f64, r: f64, a: [f64; 3]) -> [f64; 3] {
        let (s, c) = (psi.sin(), psi.cos());
        [-s * r * a[0] + c * r * a[1], -c * r * a[0] - s * r * a[1], 0.0]
    }

    fn compensation(&self, eta: [f64; 3], nu: [f64; 3], rd: [f64; 3], rdd: [f64; 3]) -> [f64; 3] {
        let psi = eta[2];
        let a = Self::jt(psi, rdd);
        let b = Self::jdot_t(psi, nu[2], rd);
        let nr = Self::jt(psi, rd);
        let (u, v) = (nu[0], nu[1]);
        let c = [
            -self.m[1] * v * nr[2],
            self.m[0] * u * nr[2],
            self.m[1] * v * nr[0] - self.m[0] * u * nr[1],
        ];
        [0, 1, 2].map(|i| self.m[i] * (a[i] + b[i]) + c[i] + self.d[i] * nr[i])
    }

    fn errors(eta: [f64; 3], nu: [f64; 3], d: [f64; 3]) -> ([f64; 3], [f64; 3]) {
        let psi = eta[2];
        let mut e = [eta[0] - d[0], eta[1] - d[1], eta[2] - d[2]];
        while e[2] > PI {
            e[2] -= 2.0 * PI;
        }
        while e[2] <= -PI {
            e[2] += 2.0 * PI;
        }
        let (s, c) = (psi.sin(), psi.cos());
        (e, [c * nu[0] - s * nu[1], s * nu[0] + c * nu[1], nu[2]])
    }

    fn backstepping(&self, eta: [f64; 3], nu: [f64; 3], d: [f64; 3], g: &BackstepGains) -> [f64; 3] {
        let (e, ed) = Self::errors(eta, nu, d);
        let l = g.lambda;
        let rd = [0, 1, 2].map(|i| -l[i] * e[i]);
        let rdd = [0, 1, 2].map(|i| -l[i] * ed[i]);
        let s = [0, 1, 2].map(|i| ed[i] + l[i] * e[i]);
        let fb = Self::jt(eta[2], [0, 1, 2].map(|i| g.kd[i] * s[i] + g.kp[i] * e[i]));
        let comp = self.compensation(eta, nu, rd, rdd);
        [0, 1, 2].map(|i| comp[i] - fb[i])
    }

    fn sliding(&self, eta: [f64; 3], nu: [f64; 3], d: [f64; 3], g: &SlidingGains, int: [f64; 3]) -> [f64; 3] {
        let (e, ed) = Self::errors(eta, nu, d);
        let l = g.lambda;
        let s = [0, 1, 2].map(|i| ed[i] + 2.0 * l[i] * e[i] + l[i] * l[i] * int[i]);
        let rd = [0, 1, 2].map(|i| -2.0 * l[i] * e[i] - l[i] * l[i] * int[i]);
        let rdd = [0, 1, 2].map(|i| -2.0 * l[i] * ed[i] - l[i] * l[i] * e[i]);
        let sw = Self::jt(
            eta[2],
            [0, 1, 2].map(|i| {
                let x = s[i] / g.e[i];
                g.r[i] * if x.abs() <= 1.0 { x } else { x.signum() }
            }),
        );
        let comp = self.compensation(eta, nu, rd, rdd);
        [0, 1, 2].map(|i| comp[i] - sw[i])
    }
}

fn close(a: Wrench, b: [f64; 3], tol: f64) -> bool {
    a.max_abs_diff(&Wrench::new(b[0], b[1], b[2])) <= tol * (1.0 + b.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

#[test]
fn tracking_error_cases() {
    let sp = Setpoint::hold(3.0, -2.0, 0.5);
    let (e, b) = tracking_error(&VehicleState::at_rest(3.0, -2.0, 0.5), &sp);
    assert_eq!(e, Vector3::zeros());
    assert_eq!(b, Vector3::zeros());

    let (e, _) = tracking_error(&VehicleState::at_rest(0.0, 0.0, rad(179.0)), &Setpoint::hold(0.0, 0.0, rad(-179.0)));
    assert_abs_diff_eq!(e[2], rad(-2.0), epsilon = 1e-12);

    let (_, b) = tracking_error(&VehicleState::at_rest(1.0, 0.0, FRAC_PI_2), &Setpoint::hold(0.0, 0.0, FRAC_PI_2));
    assert_abs_diff_eq!(b, Vector3::new(0.0, -1.0, 0.0), epsilon = 1e-12);
}

#[test]
fn pd_cases() {
    let g = PdGains { kp: [5.0, 5.0, 5.0], kd: [7.0, 8.0, 9.0] };
    let sp = Setpoint::hold(0.0, 0.0, 0.0);
    assert_eq!(pd_control(&VehicleState::at_rest(0.0, 0.0, 0.0), &sp, &g), Wrench::ZERO);
    let w = pd_control(&VehicleState::at_rest(1.0, 0.0, 0.0), &sp, &g);
    assert!(w.max_abs_diff(&Wrench::new(-5.0, 0.0, 0.0)) < 1e-12);
    let w = pd_control(&VehicleState::at_rest(0.0, 0.0, 0.2), &sp, &g);
    assert!(w.max_abs_diff(&Wrench::new(0.0, 0.0, -5.0 * 0.2)) < 1e-12);
}

#[test]
fn lambda_selection() {
    let sel = select_lambda(0.8, 4.0, 2.0).unwrap();
    assert_abs_diff_eq!(sel.rotation, 1.676, epsilon = 1e-3);
    assert_abs_diff_eq!(sel.sampling, 0.8, epsilon = 1e-12);
    assert_abs_diff_eq!(sel.rise_time, 1.0 / 6.0, epsilon = 1e-12);
    assert_eq!(sel.selected, sel.rise_time);
    assert_abs_diff_eq!(sel.selected, 0.16, epsilon = 0.01);
    assert!(select_lambda(0.0, 4.0, 2.0).is_err());
}

#[test]
fn backstepping_at_rest_on_setpoint_is_zero() {
    let sp = Setpoint::hold(1.0, 2.0, 0.3);
    let w = backstepping_control(&VehicleState::at_rest(1.0, 2.0, 0.3), &sp, &BackstepGains::default(), &model());
    assert_eq!(w, Wrench::ZERO);
}

#[test]
fn backstepping_north_offset() {
    let g = BackstepGains { lambda: [0.16; 3], kd: [10.0, 20.0, 30.0], kp: [1.0, 2.0, 3.0] };
    let w = backstepping_control(&VehicleState::at_rest(1.0, 0.0, 0.0), &Setpoint::hold(0.0, 0.0, 0.0), &g, &model());
    let expected = Oracle::new().backstepping([1.0, 0.0, 0.0], [0.0; 3], [0.0; 3], &g);
    // at rest: s = (0.16, 0, 0), eta_r' = (-0.16, 0, 0), eta_r'' = 0
    let d_x = VehicleParams::default().linear_drag.x_u;
    assert_abs_diff_eq!(expected[0], d_x * -0.16 - 10.0 * 0.16 - 1.0, epsilon = 1e-12);
    assert!(close(w, expected, 1e-12));
}

#[test]
fn backstepping_kp_linearity() {
    let s = state([1.0, -2.0, 0.4], [0.2, 0.1, -0.05]);
    let sp = Setpoint::hold(0.0, 0.0, 0.0);
    let g = BackstepGains::default();
    let g2 = BackstepGains { kp: g.kp.map(|k| 2.0 * k), ..g };
    let base = backstepping_control(&s, &sp, &g, &model());
    let doubled = backstepping_control(&s, &sp, &g2, &model());
    let (e, _) = tracking_error(&s, &sp);
    let kp_term = -(rotation_matrix(s.heading()).transpose() * diag(g.kp) * e);
    assert!((doubled - base).max_abs_diff(&Wrench::from_vector(&kp_term)) < 1e-9);
}

#[test]
fn sliding_cases() {
    let sp = Setpoint::hold(0.0, 0.0, 0.0);
    let g = SlidingGains::default();
    let w = sliding_mode_control(&VehicleState::at_rest(0.0, 0.0, 0.0), &sp, &g, &model(), &Vector3::zeros());
    assert_eq!(w, Wrench::ZERO);
    assert_eq!(sat(3.0), 1.0);
    assert_eq!(sat(-3.0), -1.0);
    assert_eq!(sat(0.25), 0.25);
}

#[test]
fn feedforward_sign() {
    let tau = Wrench::new(10.0, 0.0, 0.0);
    assert_eq!(apply_feedforward(tau, Wrench::ZERO), tau);
    assert_eq!(apply_feedforward(tau, Wrench::new(-3.0, 0.0, 0.0)), Wrench::new(13.0, 0.0, 0.0));
}

#[test]
fn anti_windup_shrinks_sway_integral_only() {
    let mut smc = SlidingMode::new(SlidingGains::default());
    let sp = Setpoint::hold(0.0, 0.0, 0.0);
    let s = VehicleState::at_rest(1.0, 1.0, 0.0);
    smc.update(&s, &sp, &model(), 1.0);
    assert_eq!(*smc.integral(), Vector3::new(1.0, 1.0, 0.0));
    smc.set_saturated(true);
    smc.update(&s, &sp, &model(), 1.0);
    assert_abs_diff_eq!(*smc.integral(), Vector3::new(2.0, 1.1, 0.0), epsilon = 1e-12);
    smc.reset();
    assert_eq!(*smc.integral(), Vector3::zeros());
}

#[test]
fn anti_windup_uses_body_sway_axis() {
    // facing East, body sway points South (earth -x)
    let mut smc = SlidingMode::new(SlidingGains::default());
    let sp = Setpoint::hold(0.0, 0.0, FRAC_PI_2);
    let s = VehicleState::at_rest(1.0, 1.0, FRAC_PI_2);
    smc.update(&s, &sp, &model(), 1.0);
    smc.set_saturated(true);
    smc.update(&s, &sp, &model(), 1.0);
    assert_abs_diff_eq!(*smc.integral(), Vector3::new(1.1, 2.0, 0.0), epsilon = 1e-12);
}

#[test]
fn controller_enum_dispatch() {
    let p = VehicleParams::default();
    let gains = ControllerGains::default();
    let s = state([2.0, -1.0, 0.3], [0.1, 0.0, 0.02]);
    let sp = Setpoint::hold(0.0, 0.0, 0.0);
    for kind in ControllerKind::ALL {
        let mut c = Controller::new(kind, &gains, &p).unwrap();
        assert_eq!(c.kind(), kind);
        assert!(c.compute(&s, &sp, 0.25).is_finite());
        assert_eq!(kind.name().parse::<ControllerKind>().unwrap(), kind);
    }
    assert!("pid".parse::<ControllerKind>().is_err());
    let bad = ControllerGains { pd: PdGains { kp: [0.0, 1.0, 1.0], kd: [1.0; 3] }, ..gains };
    assert!(Controller::new(ControllerKind::Pd, &bad, &p).is_err());
}

fn arb_state() -> impl Strategy<Value = ([f64; 3], [f64; 3])> {
    (
        (-5.0f64..5.0, -5.0f64..5.0, -PI..PI),
        (-1.0f64..1.0, -0.5f64..0.5, -0.3f64..0.3),
    )
        .prop_map(|((x, y, p), (u, v, r))| ([x, y, p], [u, v, r]))
}

proptest! {
    #[test]
    fn backstepping_matches_scalar_oracle((eta, nu) in arb_state(), d in (-3.0f64..3.0, -3.0f64..3.0, -PI..PI)) {
        let g = BackstepGains::default();
        let sp = Setpoint::hold(d.0, d.1, d.2);
        let w = backstepping_control(&state(eta, nu), &sp, &g, &model());
        let o = Oracle::new().backstepping(eta, nu, sp.eta.into(), &g);
        prop_assert!(close(w, o, 1e-10), "{w:?} vs {o:?}");
    }

    #[test]
    fn sliding_matches_scalar_oracle(
        (eta, nu) in arb_state(),
        int in (-20.0f64..20.0, -20.0f64..20.0, -5.0f64..5.0),
        small in any::<bool>(),
    ) {
        let g = SlidingGains::default();
        // small errors exercise the linear region of the boundary layer
        let k = if small { 0.01 } else { 1.0 };
        let eta = [eta[0] * k, eta[1] * k, eta[2] * k];
        let nu = nu.map(|x| x * k);
        let int = [int.0 * k, int.1 * k, int.2 * k];
        let sp = Setpoint::hold(0.0, 0.0, 0.0);
        let w = sliding_mode_control(&state(eta, nu), &sp, &g, &model(), &Vector3::from(int));
        let o = Oracle::new().sliding(eta, nu, [0.0; 3], &g, int);
        prop_assert!(close(w, o, 1e-10), "{w:?} vs {o:?}");
    }

    #[test]
    fn structural_equivalence((eta, nu) in arb_state()) {
        // Substituting K_d s + K_p e for the switching term turns the sliding
        // law into the backstepping law when both use the same reference.
        let s0 = state(eta, nu);
        let sp = Setpoint::hold(0.0, 0.0, 0.0);
        let g = BackstepGains::default();
        let m = model();
        let l = diag(g.lambda);
        let (e, _) = tracking_error(&s0, &sp);
        let e_dot = tracking_error_rate(&s0, &sp);
        let s = e_dot + l * e;
        let jt = rotation_matrix(s0.heading()).transpose();
        let comp = model_compensation(&m, &s0, &(-l * e), &(-l * e_dot));
        let substituted = comp - jt * (diag(g.kd) * s + diag(g.kp) * e);
        let bs = backstepping_control(&s0, &sp, &g, &m);
        prop_assert!(bs.max_abs_diff(&Wrench::from_vector(&substituted)) < 1e-9);

        // and the sliding law is that same compensation minus J^T R sat(E^-1 s)
        let sg = SlidingGains::default();
        let ls = diag(sg.lambda);
        let zero = Vector3::zeros();
        let surf = sliding_surface(&e, &e_dot, &zero, sg.lambda);
        let comp_s = model_compensation(&m, &s0, &(-2.0 * ls * e), &(-2.0 * ls * e_dot - ls * ls * e));
        let sw = Vector3::from_fn(|i, _| sg.r[i] * sat(surf[i] / sg.e[i]));
        let sm = sliding_mode_control(&s0, &sp, &sg, &m, &zero);
        prop_assert!(sm.max_abs_diff(&Wrench::from_vector(&(comp_s - jt * sw))) < 1e-9);
    }

    #[test]
    fn switching_term_bounded((eta, nu) in arb_state(), int in (-100.0f64..100.0, -100.0f64..100.0, -50.0f64..50.0)) {
        let g = SlidingGains::default();
        let s0 = state(eta, nu);
        let sp = Setpoint::hold(0.0, 0.0, 0.0);
        let int = Vector3::new(int.0, int.1, int.2);
        let (e, _) = tracking_error(&s0, &sp);
        let e_dot = tracking_error_rate(&s0, &sp);
        let surf = sliding_surface(&e, &e_dot, &int, g.lambda);
        for i in 0..3 {
            let term = g.r[i] * sat(surf[i] / g.e[i]);
            prop_assert!(term.abs() <= g.r[i]);
            if surf[i].abs() >= g.e[i] {
                prop_assert_eq!(term.abs(), g.r[i]);
            }
        }
    }

    #[test]
    fn all_laws_zero_at_setpoint(x in -5.0f64..5.0, y in -5.0f64..5.0, psi in -PI..PI) {
        let s = VehicleState::at_rest(x, y, psi);
        let sp = Setpoint::hold(x, y, psi);
        let p = VehicleParams::default();
        for kind in ControllerKind::ALL {
            let mut c = Controller::new(kind, &ControllerGains::default(), &p).unwrap();
            prop_assert!(c.compute(&s, &sp, 0.25).max_abs_diff(&Wrench::ZERO) < 1e-12);
        }
    }

    #[test]
    fn heading_error_stays_wrapped(psi in -PI..PI, psi_d in -PI..PI) {
        let (e, _) = tracking_error(&VehicleState::at_rest(0.0, 0.0, psi), &Setpoint::hold(0.0, 0.0, psi_d));
        prop_assert!(e[2] > -PI && e[2] <= PI);
    }
}
