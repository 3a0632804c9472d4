use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{KinematicsError, GRID_TOLERANCE_S};
use crate::math;

/// Raw channel vectors, as read from or written to a file.
///
/// Convert with [`StateSequence::new`] to get a validated sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateChannels {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub a: Vec<f64>,
    pub j: Vec<f64>,
    pub omega: Vec<f64>,
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
}

/// Time-aligned kinematic channels of one clip.
///
/// Invariants: equal channel lengths of at least two, constant grid spacing,
/// non-negative speed, no NaN/Inf anywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateChannels", into = "StateChannels")]
pub struct StateSequence {
    ch: StateChannels,
}

impl StateSequence {
    pub fn new(ch: StateChannels) -> Result<Self, KinematicsError> {
        let n = ch.t.len();
        if n < 2 {
            return Err(KinematicsError::TooFewSamples { needed: 2, got: n });
        }
        super::check_times(ch.t.iter().copied())?;
        let dt = ch.t[1] - ch.t[0];
        for i in 2..n {
            if math::abs((ch.t[i] - ch.t[i - 1]) - dt) > GRID_TOLERANCE_S {
                return Err(KinematicsError::NonUniformGrid { index: i });
            }
        }
        let mut channels: Vec<(&'static str, &[f64])> = alloc::vec![
            ("v", &ch.v),
            ("a", &ch.a),
            ("j", &ch.j),
            ("omega", &ch.omega),
            ("theta", &ch.theta),
        ];
        match (&ch.x, &ch.y) {
            (Some(x), Some(y)) => {
                channels.push(("x", x));
                channels.push(("y", y));
            }
            (None, None) => {}
            _ => return Err(KinematicsError::PartialPositions),
        }
        for (channel, values) in channels {
            if values.len() != n {
                return Err(KinematicsError::ChannelLength {
                    channel,
                    len: values.len(),
                    expected: n,
                });
            }
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(KinematicsError::NonFinite { index });
            }
        }
        if let Some(index) = ch.v.iter().position(|&v| v < 0.0) {
            return Err(KinematicsError::NegativeSpeed { index });
        }
        Ok(Self { ch })
    }

    pub fn len(&self) -> usize {
        self.ch.t.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self) -> &[f64] {
        &self.ch.t
    }

    pub fn v(&self) -> &[f64] {
        &self.ch.v
    }

    pub fn a(&self) -> &[f64] {
        &self.ch.a
    }

    pub fn j(&self) -> &[f64] {
        &self.ch.j
    }

    pub fn omega(&self) -> &[f64] {
        &self.ch.omega
    }

    /// Unwrapped heading.
    pub fn theta(&self) -> &[f64] {
        &self.ch.theta
    }

    pub fn positions(&self) -> Option<(&[f64], &[f64])> {
        match (&self.ch.x, &self.ch.y) {
            (Some(x), Some(y)) => Some((x, y)),
            _ => None,
        }
    }

    /// Grid spacing in seconds.
    pub fn dt(&self) -> f64 {
        self.ch.t[1] - self.ch.t[0]
    }

    pub fn duration(&self) -> f64 {
        self.ch.t[self.len() - 1] - self.ch.t[0]
    }

    /// Last index of the first half. With 31 samples this is 15: the midpoint
    /// sample belongs to the first half.
    pub fn midpoint_index(&self) -> usize {
        (self.len() - 1) / 2
    }

    pub fn channels(&self) -> &StateChannels {
        &self.ch
    }

    pub fn into_channels(self) -> StateChannels {
        self.ch
    }
}

impl TryFrom<StateChannels> for StateSequence {
    type Error = KinematicsError;

    fn try_from(ch: StateChannels) -> Result<Self, Self::Error> {
        StateSequence::new(ch)
    }
}

impl From<StateSequence> for StateChannels {
    fn from(seq: StateSequence) -> Self {
        seq.ch
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn channels(n: usize) -> StateChannels {
        StateChannels {
            t: (0..n).map(|i| i as f64 * 0.1).collect(),
            v: vec![1.0; n],
            a: vec![0.0; n],
            j: vec![0.0; n],
            omega: vec![0.0; n],
            theta: vec![0.0; n],
            x: None,
            y: None,
        }
    }

    #[test]
    fn accepts_valid_channels() {
        let seq = StateSequence::new(channels(31)).unwrap();
        assert_eq!(seq.len(), 31);
        assert_eq!(seq.midpoint_index(), 15);
        assert!((seq.duration() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_channels() {
        let mut ch = channels(5);
        ch.v[2] = -0.1;
        assert_eq!(StateSequence::new(ch), Err(KinematicsError::NegativeSpeed { index: 2 }));

        let mut ch = channels(5);
        ch.a.pop();
        assert!(matches!(
            StateSequence::new(ch),
            Err(KinematicsError::ChannelLength { channel: "a", .. })
        ));

        let mut ch = channels(5);
        ch.t[3] = 0.35;
        assert!(matches!(
            StateSequence::new(ch),
            Err(KinematicsError::NonUniformGrid { .. })
        ));

        let mut ch = channels(5);
        ch.omega[1] = f64::NAN;
        assert!(matches!(
            StateSequence::new(ch),
            Err(KinematicsError::NonFinite { index: 1 })
        ));

        let mut ch = channels(5);
        ch.x = Some(vec![0.0; 5]);
        assert_eq!(StateSequence::new(ch), Err(KinematicsError::PartialPositions));

        assert!(matches!(
            StateSequence::new(channels(1)),
            Err(KinematicsError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn serde_validates() {
        let mut ch = channels(3);
        ch.v[0] = -1.0;
        let json = serde_json::to_string(&ch).unwrap();
        assert!(serde_json::from_str::<StateSequence>(&json).is_err());
    }
}
