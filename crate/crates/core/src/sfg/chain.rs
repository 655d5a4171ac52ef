use crate::error::{Error, Result};

/// Row sums must be within this distance of one.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Finite discrete-time Markov chain with labelled states.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    states: Vec<String>,
    transitions: Vec<Vec<f64>>,
}

impl MarkovChain {
    pub fn new<S: Into<String>>(states: Vec<S>, transitions: Vec<Vec<f64>>) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidParameter("chain has no states".into()));
        }
        if transitions.len() != n || transitions.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter(format!(
                "transition matrix must be {n} x {n}"
            )));
        }
        for (label, row) in states.iter().zip(&transitions) {
            if row.iter().any(|q| !(0.0..=1.0).contains(q)) {
                return Err(Error::InvalidParameter(format!(
                    "row `{label}` has an entry outside [0, 1]"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidParameter(format!(
                    "row `{label}` sums to {sum}"
                )));
            }
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::InvalidParameter(format!("duplicate state `{s}`")));
            }
        }
        Ok(Self {
            states,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    /// One-step probability `q_{from,to}`.
    pub fn prob(&self, from: &str, to: &str) -> Result<f64> {
        let i = self
            .index_of(from)
            .ok_or_else(|| Error::UnknownLabel(from.into()))?;
        let j = self
            .index_of(to)
            .ok_or_else(|| Error::UnknownLabel(to.into()))?;
        Ok(self.transitions[i][j])
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.transitions[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_rows() {
        assert!(MarkovChain::new(vec!["a", "b"], vec![vec![0.5, 0.5], vec![1.0, 0.0]]).is_ok());
        assert!(MarkovChain::new(vec!["a", "b"], vec![vec![0.5, 0.4], vec![1.0, 0.0]]).is_err());
        assert!(MarkovChain::new(vec!["a", "b"], vec![vec![1.5, -0.5], vec![1.0, 0.0]]).is_err());
        assert!(MarkovChain::new(vec!["a"], vec![vec![1.0, 0.0]]).is_err());
        assert!(MarkovChain::new(vec!["a", "a"], vec![vec![1.0, 0.0], vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn lookup() {
        let c = MarkovChain::new(vec!["a", "b"], vec![vec![0.25, 0.75], vec![1.0, 0.0]]).unwrap();
        assert_eq!(c.prob("a", "b").unwrap(), 0.75);
        assert!(matches!(c.prob("a", "z"), Err(Error::UnknownLabel(_))));
    }
}
