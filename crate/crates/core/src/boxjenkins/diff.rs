//! Ordinary and seasonal differencing with exact inversion.
//!
//! `difference` applies `(1−B^s)^D` first, then `(1−B)^d`, retaining each
//! stage's leading values so `undifference` can reconstruct the original
//! series exactly.

use super::BoxJenkinsError;

/// Head values retained per differencing stage, in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceState {
    stages: Vec<(usize, Vec<f64>)>,
}

impl DifferenceState {
    pub fn stages(&self) -> &[(usize, Vec<f64>)] {
        &self.stages
    }

    /// Total number of observations consumed by differencing.
    pub fn consumed(&self) -> usize {
        self.stages.iter().map(|(lag, _)| lag).sum()
    }
}

fn diff_once(values: &[f64], lag: usize) -> (Vec<f64>, Vec<f64>) {
    let head = values[..lag].to_vec();
    let out = (lag..values.len()).map(|i| values[i] - values[i - lag]).collect();
    (out, head)
}

/// Applies seasonal differencing `D` times at lag `s`, then ordinary
/// differencing `d` times. Requires `len > d + D·s` so at least one
/// observation survives.
pub fn difference(
    values: &[f64],
    d: usize,
    seasonal_d: usize,
    season_length: usize,
) -> Result<(Vec<f64>, DifferenceState), BoxJenkinsError> {
    if seasonal_d > 0 && season_length == 0 {
        return Err(BoxJenkinsError::InvalidOrder {
            message: "seasonal differencing requires a season length".into(),
        });
    }
    let consumed = d + seasonal_d * season_length;
    if values.len() <= consumed {
        return Err(BoxJenkinsError::TooShort { len: values.len(), min: consumed + 1 });
    }

    let mut current = values.to_vec();
    let mut stages = Vec::with_capacity(d + seasonal_d);
    for _ in 0..seasonal_d {
        let (next, head) = diff_once(&current, season_length);
        stages.push((season_length, head));
        current = next;
    }
    for _ in 0..d {
        let (next, head) = diff_once(&current, 1);
        stages.push((1, head));
        current = next;
    }
    Ok((current, DifferenceState { stages }))
}

/// Exact left inverse of [`difference`].
pub fn undifference(diffed: &[f64], state: &DifferenceState) -> Result<Vec<f64>, BoxJenkinsError> {
    let mut current = diffed.to_vec();
    for (lag, head) in state.stages.iter().rev() {
        if head.len() != *lag {
            return Err(BoxJenkinsError::StateMismatch {
                message: format!("stage head has {} values, lag is {}", head.len(), lag),
            });
        }
        let mut restored = Vec::with_capacity(current.len() + lag);
        restored.extend_from_slice(head);
        for (i, &v) in current.iter().enumerate() {
            let base = restored[i];
            restored.push(v + base);
        }
        current = restored;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_difference() {
        let (out, state) = difference(&[1.0, 3.0, 6.0], 1, 0, 0).unwrap();
        assert_eq!(out, vec![2.0, 3.0]);
        assert_eq!(state.consumed(), 1);
    }

    #[test]
    fn seasonal_difference_by_hand() {
        let y: Vec<f64> = (1..=8).map(|v| v as f64).collect();
        let (out, _) = difference(&y, 0, 1, 4).unwrap();
        assert_eq!(out, vec![4.0, 4.0, 4.0, 4.0]);
    }

    #[test]
    fn undifference_restores_simple_case() {
        let state = DifferenceState { stages: vec![(1, vec![1.0])] };
        let restored = undifference(&[2.0, 3.0], &state).unwrap();
        assert_eq!(restored, vec![1.0, 3.0, 6.0]);
    }

    #[test]
    fn seasonal_round_trip_by_hand() {
        let y = vec![2.0, 5.0, 3.0, 7.0, 4.0, 9.0];
        let (out, state) = difference(&y, 0, 1, 2).unwrap();
        assert_eq!(out, vec![1.0, 2.0, 1.0, 2.0]);
        assert_eq!(undifference(&out, &state).unwrap(), y);
    }

    #[test]
    fn mixed_round_trips_exactly() {
        let y: Vec<f64> = (0..40).map(|i| (i as f64 * 0.7).sin() * 3.0 + i as f64 * 0.2).collect();
        for &(d, dd, s) in &[(0, 0, 0), (1, 0, 0), (2, 0, 0), (1, 1, 4), (2, 1, 7), (0, 1, 7)] {
            let (out, state) = difference(&y, d, dd, s).unwrap();
            assert_eq!(out.len(), y.len() - d - dd * s);
            let back = undifference(&out, &state).unwrap();
            for (a, b) in y.iter().zip(&back) {
                assert!((a - b).abs() < 1e-10, "(d,D,s)=({d},{dd},{s})");
            }
        }
    }

    #[test]
    fn too_short_is_error() {
        assert!(matches!(
            difference(&[1.0, 2.0], 2, 0, 0),
            Err(BoxJenkinsError::TooShort { .. })
        ));
    }
}
