use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A value assignment on the projectors `P_S = Σ_{i∈S} |i⟩⟨i|` of a fixed
/// orthonormal basis. `values[mask]` is `f(P_S)` with `S` encoded as a bitmask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativeFunctional {
    pub dim: usize,
    pub values: Vec<f64>,
    /// The single basis index whose one-dimensional projector gets value 1.
    pub selected: usize,
}

impl MultiplicativeFunctional {
    pub fn value(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    /// Values on the one-dimensional projectors `|i⟩⟨i|`.
    pub fn atom_values(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.values[1 << i]).collect()
    }
}

/// Every real-valued `f` on the commuting projector family of a `dim`-level
/// basis with `f(P·Q) = f(P)·f(Q)` that is 1 on some but not all rank-one
/// projectors.
///
/// `f(P) = f(P·P) = f(P)²` restricts values to `{0, 1}`; the search then
/// assigns subsets in increasing mask order, rejecting any value that breaks
/// the product rule against an already-assigned subset. Each survivor is
/// checked to single out exactly one rank-one projector.
pub fn enumerate_multiplicative_functionals(dim: usize) -> Result<Vec<MultiplicativeFunctional>> {
    if !(2..=10).contains(&dim) {
        return Err(Error::DimensionOutOfRange(dim));
    }
    let size = 1usize << dim;
    let mut found = Vec::new();
    let mut values = Vec::with_capacity(size);
    search(size, &mut values, &mut found);

    let mut out = Vec::new();
    for values in found {
        let ones: Vec<usize> = (0..dim).filter(|i| values[1 << i] == 1.0).collect();
        if ones.is_empty() || ones.len() == dim {
            continue;
        }
        if ones.len() != 1 {
            return Err(Error::Invariant(format!(
                "multiplicative functional is 1 on {} rank-one projectors",
                ones.len()
            )));
        }
        out.push(MultiplicativeFunctional {
            dim,
            values,
            selected: ones[0],
        });
    }
    out.sort_by_key(|f| f.selected);
    Ok(out)
}

fn search(size: usize, values: &mut Vec<f64>, found: &mut Vec<Vec<f64>>) {
    let mask = values.len();
    if mask == size {
        found.push(values.clone());
        return;
    }
    for candidate in [0.0, 1.0] {
        // k < mask implies mask & k <= k < mask, so every product is assigned.
        let consistent = (0..mask).all(|k| values[mask & k] == candidate * values[k]);
        if consistent {
            values.push(candidate);
            search(size, values, found);
            values.pop();
        }
    }
}
