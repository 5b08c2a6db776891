//! Built-in scenarios and base fields, embedded as the same TOML documents a
//! user would write.

use crate::riemann::VectorFieldHandle;

pub const SCENARIO_NAMES: [&str; 3] = ["damped-radial", "euler-top", "integrable-chain"];
pub const BASE_FIELD_NAMES: [&str; 1] = ["euler-top"];

/// Radial damping in the plane: `D = |x|^2 / 2` with rate `h = -|x|^2`, so
/// `D' = -2D` along the synthesized field and `D(t) = D(0) e^{-2t}`.
const DAMPED_RADIAL: &str = r#"
dim = 2
metric = "identity"
x0 = [1.0, 0.0]
dt = 0.001
steps = 1000

[[dissipated]]
name = "D"
terms = [{ coeff = 0.5, exponents = [2, 0] }, { coeff = 0.5, exponents = [0, 2] }]

[[rates]]
name = "h"
terms = [{ coeff = -1.0, exponents = [2, 0] }, { coeff = -1.0, exponents = [0, 2] }]
"#;

/// Rigid-body-style system: two conserved quadratics with inertia weights
/// (1, 2, 3); the single generator is the cross product of the gradients and
/// drives the orbit with unit coefficient.
const EULER_TOP: &str = r#"
dim = 3
metric = "identity"
x0 = [1.0, 0.6, -0.8]
dt = 0.001
steps = 10000

[[conserved]]
name = "I1"
terms = [
    { coeff = 0.5, exponents = [2, 0, 0] },
    { coeff = 0.5, exponents = [0, 2, 0] },
    { coeff = 0.5, exponents = [0, 0, 2] },
]

[[conserved]]
name = "I2"
terms = [
    { coeff = 0.5, exponents = [2, 0, 0] },
    { coeff = 0.25, exponents = [0, 2, 0] },
    { coeff = 0.16666666666666666, exponents = [0, 0, 2] },
]

[[direction_coeffs]]
name = "c1"
terms = [{ coeff = 1.0, exponents = [0, 0, 0] }]
"#;

/// Completely integrable case `k = n - 1`: three chained quadratics in R^4;
/// the orbit follows the single generator `*(grad I1 ^ grad I2 ^ grad I3)`.
const INTEGRABLE_CHAIN: &str = r#"
dim = 4
metric = "identity"
x0 = [1.0, 0.5, -0.8, 0.3]
dt = 0.001
steps = 2000

[[conserved]]
name = "I1"
terms = [{ coeff = 0.5, exponents = [2, 0, 0, 0] }, { coeff = 0.5, exponents = [0, 2, 0, 0] }]

[[conserved]]
name = "I2"
terms = [{ coeff = 0.5, exponents = [0, 2, 0, 0] }, { coeff = 0.5, exponents = [0, 0, 2, 0] }]

[[conserved]]
name = "I3"
terms = [{ coeff = 0.5, exponents = [0, 0, 2, 0] }, { coeff = 0.5, exponents = [0, 0, 0, 2] }]

[[direction_coeffs]]
name = "c1"
terms = [{ coeff = 1.0, exponents = [0, 0, 0, 0] }]
"#;

pub fn scenario_toml(name: &str) -> Option<&'static str> {
    match name {
        "damped-radial" => Some(DAMPED_RADIAL),
        "euler-top" => Some(EULER_TOP),
        "integrable-chain" => Some(INTEGRABLE_CHAIN),
        _ => None,
    }
}

/// Named base fields usable from scenario configs. `"euler-top"` is the
/// cross product of the two standard quadratic integrals with inertia
/// weights (1, 2, 3); it conserves both, which makes it a valid base for
/// perturbed scenarios built on those quantities.
pub fn base_field(name: &str) -> Option<VectorFieldHandle> {
    match name {
        "euler-top" => Some(VectorFieldHandle::from_fn(3, |x| {
            let grad_i1 = [x[0], x[1], x[2]];
            let grad_i2 = [x[0], x[1] / 2.0, x[2] / 3.0];
            Ok(vec![
                grad_i1[1] * grad_i2[2] - grad_i1[2] * grad_i2[1],
                grad_i1[2] * grad_i2[0] - grad_i1[0] * grad_i2[2],
                grad_i1[0] * grad_i2[1] - grad_i1[1] * grad_i2[0],
            ])
        })),
        _ => None,
    }
}
