//! The four standard test functions with registered default domains,
//! dimensions, and known optima. All of them minimize to exactly 0.

use std::f64::consts::{E, PI};

use thiserror::Error;

use crate::core::{Bounds, Objective};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("input vector must not be empty")]
    EmptyInput,
    #[error("{name} requires at least {min} dimensions, got {actual}")]
    TooFewDimensions {
        name: &'static str,
        min: usize,
        actual: usize,
    },
    #[error("unknown function `{name}`; available: {}", FUNCTION_NAMES.join(", "))]
    UnknownFunction { name: String },
}

/// Canonical registry names.
pub const FUNCTION_NAMES: [&str; 4] = ["dejong", "rosenbrock", "ackley", "rastrigin"];

/// Sum of squares; unimodal bowl with its minimum 0 at the origin.
pub fn de_jong(x: &[f64]) -> Result<f64, BenchError> {
    if x.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    Ok(x.iter().map(|xi| xi * xi).sum())
}

/// Chained banana valleys; minimum 0 at the all-ones point.
pub fn rosenbrock(x: &[f64]) -> Result<f64, BenchError> {
    if x.len() < 2 {
        return Err(BenchError::TooFewDimensions {
            name: "rosenbrock",
            min: 2,
            actual: x.len(),
        });
    }
    Ok(x.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            100.0 * (a * a - b).powi(2) + (1.0 - a).powi(2)
        })
        .sum())
}

/// Exponentially flattened bowl with a cosine ripple; minimum 0 at the
/// origin in any dimension.
pub fn ackley(x: &[f64]) -> Result<f64, BenchError> {
    if x.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let n = x.len() as f64;
    let sum_sq: f64 = x.iter().map(|xi| xi * xi).sum();
    let sum_cos: f64 = x.iter().map(|xi| (2.0 * PI * xi).cos()).sum();
    Ok(-20.0 * (-0.2 * (sum_sq / n).sqrt()).exp() - (sum_cos / n).exp() + 20.0 + E)
}

/// Paraboloid plus cosine lattice of local minima; minimum 0 at the origin.
pub fn rastrigin(x: &[f64]) -> Result<f64, BenchError> {
    if x.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let n = x.len() as f64;
    Ok(10.0 * n
        + x.iter()
            .map(|xi| xi * xi - 10.0 * (2.0 * PI * xi).cos())
            .sum::<f64>())
}

/// A registered benchmark with its objective resolved to a concrete
/// dimension, plus the known optimum.
#[derive(Debug)]
pub struct BenchmarkSpec {
    pub name: &'static str,
    pub objective: Objective,
    pub dim: usize,
    pub optimum_position: Vec<f64>,
    pub optimum_value: f64,
}

/// Looks a function up by name, resolving `dim` to the registered default
/// when absent.
///
/// Defaults: De Jong 32-d on [-5.12, 5.12], Rosenbrock 16-d on [-5, 10],
/// Ackley 128-d on [-32.768, 32.768], Rastrigin 16-d on [-5.12, 5.12]. The
/// bounds are the literature-standard domains for each function.
pub fn registry(name: &str, dim: Option<usize>) -> Result<BenchmarkSpec, BenchError> {
    let canonical = match name.to_ascii_lowercase().as_str() {
        "dejong" | "de_jong" | "de-jong" => "dejong",
        "rosenbrock" => "rosenbrock",
        "ackley" => "ackley",
        "rastrigin" => "rastrigin",
        _ => {
            return Err(BenchError::UnknownFunction {
                name: name.to_string(),
            })
        }
    };

    let (default_dim, lower, upper, min_dim): (usize, f64, f64, usize) = match canonical {
        "dejong" => (32, -5.12, 5.12, 1),
        "rosenbrock" => (16, -5.0, 10.0, 2),
        "ackley" => (128, -32.768, 32.768, 1),
        "rastrigin" => (16, -5.12, 5.12, 1),
        _ => unreachable!(),
    };
    let dim = dim.unwrap_or(default_dim);
    if dim < min_dim {
        return Err(BenchError::TooFewDimensions {
            name: canonical,
            min: min_dim,
            actual: dim,
        });
    }

    let bounds = Bounds::uniform(dim, lower, upper).expect("registry bounds are well-formed");
    let (objective, optimum_position) = match canonical {
        "dejong" => (
            Objective::new(canonical, bounds, |x| {
                de_jong(x).expect("dimension fixed by bounds")
            }),
            vec![0.0; dim],
        ),
        "rosenbrock" => (
            Objective::new(canonical, bounds, |x| {
                rosenbrock(x).expect("dimension fixed by bounds")
            }),
            vec![1.0; dim],
        ),
        "ackley" => (
            Objective::new(canonical, bounds, |x| {
                ackley(x).expect("dimension fixed by bounds")
            }),
            vec![0.0; dim],
        ),
        "rastrigin" => (
            Objective::new(canonical, bounds, |x| {
                rastrigin(x).expect("dimension fixed by bounds")
            }),
            vec![0.0; dim],
        ),
        _ => unreachable!(),
    };

    Ok(BenchmarkSpec {
        name: canonical,
        objective: objective.with_known_optimum(0.0),
        dim,
        optimum_position,
        optimum_value: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::core::{seeded_rng, uniform_point};

    #[test]
    fn optima_evaluate_to_zero() {
        assert_eq!(de_jong(&[0.0; 5]).unwrap(), 0.0);
        assert_eq!(rosenbrock(&[1.0; 5]).unwrap(), 0.0);
        assert!(ackley(&[0.0; 2]).unwrap().abs() < 1e-12);
        assert!(ackley(&[0.0; 128]).unwrap().abs() < 1e-12);
        assert_eq!(rastrigin(&[0.0; 5]).unwrap(), 0.0);
    }

    #[test]
    fn hand_evaluated_spot_values() {
        assert_eq!(de_jong(&[1.0, 2.0, 3.0]).unwrap(), 14.0);
        assert_eq!(de_jong(&[-2.0]).unwrap(), 4.0);
        assert_eq!(rosenbrock(&[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(rosenbrock(&[-1.0, 1.0]).unwrap(), 4.0);
        // 20 (1 - e^{-0.2}): the cosine term cancels against +e at integers.
        assert_abs_diff_eq!(
            ackley(&[1.0, 1.0]).unwrap(),
            20.0 * (1.0 - (-0.2f64).exp()),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(ackley(&[1.0, 1.0]).unwrap(), 3.625384938, epsilon = 1e-6);
        assert_abs_diff_eq!(rastrigin(&[1.0, 1.0]).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rastrigin(&[0.5]).unwrap(), 20.25, epsilon = 1e-12);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert_eq!(de_jong(&[]), Err(BenchError::EmptyInput));
        assert_eq!(ackley(&[]), Err(BenchError::EmptyInput));
        assert_eq!(rastrigin(&[]), Err(BenchError::EmptyInput));
        assert!(matches!(
            rosenbrock(&[1.0]),
            Err(BenchError::TooFewDimensions { min: 2, .. })
        ));
    }

    #[test]
    fn registry_resolves_default_dimensions() {
        assert_eq!(registry("dejong", None).unwrap().dim, 32);
        assert_eq!(registry("rosenbrock", None).unwrap().dim, 16);
        assert_eq!(registry("ackley", None).unwrap().dim, 128);
        assert_eq!(registry("rastrigin", None).unwrap().dim, 16);

        let spec = registry("rosenbrock", Some(2)).unwrap();
        assert_eq!(spec.dim, 2);
        assert_eq!(spec.optimum_position, vec![1.0, 1.0]);
        assert_eq!(spec.optimum_value, 0.0);
    }

    #[test]
    fn registry_rejects_unknown_names_and_bad_dims() {
        let err = registry("nosuch", None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nosuch"));
        for name in FUNCTION_NAMES {
            assert!(msg.contains(name), "{msg} should list {name}");
        }
        assert!(registry("rosenbrock", Some(1)).is_err());
        assert!(registry("dejong", Some(0)).is_err());
    }

    #[test]
    fn registered_optima_evaluate_to_optimum_value() {
        for name in FUNCTION_NAMES {
            let spec = registry(name, None).unwrap();
            let v = spec.objective.evaluate(&spec.optimum_position);
            assert!(
                (v - spec.optimum_value).abs() < 1e-9,
                "{name} optimum off: {v}"
            );
            assert!(spec.objective.bounds().contains(&spec.optimum_position));
        }
    }

    #[test]
    fn non_negative_on_random_points() {
        for name in FUNCTION_NAMES {
            let spec = registry(name, Some(6)).unwrap();
            let mut rng = seeded_rng(11);
            for _ in 0..100_000 {
                let p = uniform_point(spec.objective.bounds(), &mut rng);
                let v = spec.objective.evaluate(&p);
                assert!(v >= -1e-9, "{name}({p:?}) = {v}");
            }
        }
    }

    #[test]
    fn separable_functions_decompose_over_concatenation() {
        let mut rng = seeded_rng(5);
        let bounds = Bounds::symmetric(1, 5.12).unwrap();
        for _ in 0..500 {
            let x: Vec<f64> = (0..4).map(|_| uniform_point(&bounds, &mut rng)[0]).collect();
            let y: Vec<f64> = (0..3).map(|_| uniform_point(&bounds, &mut rng)[0]).collect();
            let xy: Vec<f64> = x.iter().chain(&y).copied().collect();

            let whole = de_jong(&xy).unwrap();
            let parts = de_jong(&x).unwrap() + de_jong(&y).unwrap();
            assert_abs_diff_eq!(whole, parts, epsilon = 1e-12 * whole.abs().max(1.0));

            let whole = rastrigin(&xy).unwrap();
            let parts = rastrigin(&x).unwrap() + rastrigin(&y).unwrap();
            assert_abs_diff_eq!(whole, parts, epsilon = 1e-12 * whole.abs().max(1.0));
        }
    }

    #[test]
    fn symmetric_functions_ignore_coordinate_order() {
        let mut rng = seeded_rng(6);
        let bounds = Bounds::symmetric(5, 5.12).unwrap();
        for _ in 0..500 {
            let x = uniform_point(&bounds, &mut rng);
            let mut rev = x.clone();
            rev.reverse();
            let mut rot = x.clone();
            rot.rotate_left(2);
            for f in [
                de_jong as fn(&[f64]) -> Result<f64, BenchError>,
                ackley,
                rastrigin,
            ] {
                let a = f(&x).unwrap();
                for variant in [&rev, &rot] {
                    let b = f(variant).unwrap();
                    assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs().max(1.0));
                }
            }
        }
    }
}
