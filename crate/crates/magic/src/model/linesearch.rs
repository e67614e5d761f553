//! Backtracking line search for projected gradient ascent.
//!
//! Candidate steps shrink geometrically from the initial step; a step is
//! accepted once the objective at the nonnegativity-projected point improves
//! by at least `armijo * step * ||direction||^2`. When no candidate
//! qualifies the step is zero and the iterate stays put, which keeps every
//! sweep monotone.

use crate::matrix::dot;

#[derive(Debug, Clone, Copy)]
pub struct LineSearchParams {
    pub initial_step: f64,
    pub shrink: f64,
    pub armijo: f64,
    pub max_backtracks: usize,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        LineSearchParams {
            initial_step: 1.0,
            shrink: 0.5,
            armijo: 1e-4,
            max_backtracks: 10,
        }
    }
}

/// Projection of `point + step * direction` onto the nonnegative orthant.
pub(crate) fn projected_point(point: &[f64], direction: &[f64], step: f64) -> Vec<f64> {
    point
        .iter()
        .zip(direction)
        .map(|(&x, &d)| (x + step * d).max(0.0))
        .collect()
}

/// Returns the largest step `initial * shrink^m` (m <= max_backtracks) whose
/// projected point satisfies the Armijo ascent condition, or zero when none
/// does.
pub fn backtracking_step(
    objective: impl Fn(&[f64]) -> f64,
    point: &[f64],
    direction: &[f64],
    params: &LineSearchParams,
) -> f64 {
    let gradient_norm2 = dot(direction, direction);
    if gradient_norm2 == 0.0 {
        return 0.0;
    }
    let base = objective(point);
    let mut step = params.initial_step;
    for _ in 0..=params.max_backtracks {
        let candidate = projected_point(point, direction, step);
        let value = objective(&candidate);
        if value.is_finite() && value - base >= params.armijo * step * gradient_norm2 {
            return step;
        }
        step *= params.shrink;
    }
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_an_improving_step_on_a_parabola() {
        // maximize -(x-1)^2 from 0 with gradient 2
        let obj = |x: &[f64]| -(x[0] - 1.0) * (x[0] - 1.0);
        let params = LineSearchParams::default();
        let step = backtracking_step(obj, &[0.0], &[2.0], &params);
        assert!(step > 0.0);
        let new_point = projected_point(&[0.0], &[2.0], step);
        assert!(new_point[0] > 0.0 && new_point[0] < 2.0);
        assert!(obj(&new_point) > obj(&[0.0]));
    }

    #[test]
    fn zero_gradient_means_zero_step() {
        let obj = |x: &[f64]| -x[0] * x[0];
        let step = backtracking_step(obj, &[1.0], &[0.0], &LineSearchParams::default());
        assert_eq!(step, 0.0);
    }

    #[test]
    fn descent_direction_falls_back_to_zero() {
        // objective decreases along the direction at every candidate step
        let obj = |x: &[f64]| -x[0];
        let step = backtracking_step(obj, &[1.0], &[1.0], &LineSearchParams::default());
        assert_eq!(step, 0.0);
    }

    #[test]
    fn projection_clamps_negative_coordinates() {
        assert_eq!(projected_point(&[0.5, 0.1], &[-2.0, 1.0], 1.0), vec![0.0, 1.1]);
    }
}
