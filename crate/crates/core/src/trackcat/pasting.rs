use serde::{Deserialize, Serialize};

use super::{TrackError, TrackExtension};

/// One primitive of a pasting program. Operands refer to earlier values:
/// indices below the number of inputs are inputs, later indices are the
/// results of previous steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step<M> {
    /// `second □ first`.
    VerticalCompose { second: usize, first: usize },
    Invert(usize),
    /// `map_* track`.
    LeftWhisker { map: M, track: usize },
    /// `map^* track`.
    RightWhisker { track: usize, map: M },
}

/// Straight-line program of whiskers and vertical composites; the value of
/// the program is the value of its last step (or its first input if empty).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PastingScheme<M> {
    pub steps: Vec<Step<M>>,
}

impl<M> Default for PastingScheme<M> {
    fn default() -> Self {
        PastingScheme { steps: Vec::new() }
    }
}

impl<M> PastingScheme<M> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a step; returns the index of its result given `inputs`
    /// inputs.
    pub fn push(&mut self, inputs: usize, step: Step<M>) -> usize {
        self.steps.push(step);
        inputs + self.steps.len() - 1
    }
}

/// Evaluates `scheme` on `inputs`. Errors name the failing step.
pub fn paste<E: TrackExtension + ?Sized>(
    ext: &E,
    scheme: &PastingScheme<E::Map>,
    inputs: &[E::Track],
) -> Result<E::Track, TrackError> {
    let mut values: Vec<E::Track> = inputs.to_vec();
    for (k, step) in scheme.steps.iter().enumerate() {
        let at = |i: usize| -> Result<&E::Track, TrackError> {
            values.get(i).ok_or_else(|| TrackError::Pasting {
                step: k,
                message: format!("operand {i} is not defined yet"),
            })
        };
        let wrap = |e: TrackError| TrackError::Pasting {
            step: k,
            message: e.to_string(),
        };
        let v = match step {
            Step::VerticalCompose { second, first } => {
                let (s, f) = (at(*second)?, at(*first)?);
                if ext.target_of(f) != ext.source_of(s) {
                    return Err(TrackError::Pasting {
                        step: k,
                        message: format!(
                            "target {} of the first track differs from source {} of the second",
                            ext.describe_map(&ext.target_of(f)),
                            ext.describe_map(&ext.source_of(s))
                        ),
                    });
                }
                ext.vcomp(s, f).map_err(wrap)?
            }
            Step::Invert(i) => ext.inverse(at(*i)?),
            Step::LeftWhisker { map, track } => ext.whisker_left(map, at(*track)?).map_err(wrap)?,
            Step::RightWhisker { track, map } => ext.whisker_right(at(*track)?, map).map_err(wrap)?,
        };
        values.push(v);
    }
    values.last().cloned().ok_or_else(|| TrackError::Pasting {
        step: 0,
        message: "empty program without inputs".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilgroup::Nil2Hom;
    use crate::trackcat::{LinearExtension, SplitModel};

    fn model() -> SplitModel {
        SplitModel::new("Z/4".parse().unwrap(), 2)
    }

    #[test]
    fn empty_scheme_returns_input() {
        let m = model();
        let t = m.sigma(&Nil2Hom::power(2), &[3]).unwrap();
        assert_eq!(paste(&m, &PastingScheme::new(), std::slice::from_ref(&t)).unwrap(), t);
    }

    #[test]
    fn track_after_inverse_is_identity() {
        let m = model();
        let f = Nil2Hom::power(2);
        let t = m.sigma(&f, &[3]).unwrap();
        let mut s = PastingScheme::new();
        let inv = s.push(1, Step::Invert(0));
        s.push(1, Step::VerticalCompose { second: 0, first: inv });
        assert_eq!(paste(&m, &s, &[t]).unwrap(), m.identity_track(&f));
    }

    #[test]
    fn whisker_by_square_doubles() {
        let m = model();
        let t = m.sigma(&Nil2Hom::power(1), &[1]).unwrap();
        let s = PastingScheme {
            steps: vec![Step::LeftWhisker {
                map: Nil2Hom::power(2),
                track: 0,
            }],
        };
        assert_eq!(paste(&m, &s, &[t]).unwrap().coord.coords(), &[2]);
    }

    #[test]
    fn mismatch_names_the_step() {
        let m = model();
        let a = m.sigma(&Nil2Hom::power(2), &[1]).unwrap();
        let b = m.sigma(&Nil2Hom::power(3), &[1]).unwrap();
        let s = PastingScheme {
            steps: vec![
                Step::Invert(0),
                Step::VerticalCompose { second: 1, first: 2 },
            ],
        };
        match paste(&m, &s, &[a, b]) {
            Err(TrackError::Pasting { step, .. }) => assert_eq!(step, 1),
            other => panic!("expected a pasting error, got {other:?}"),
        }
    }
}
