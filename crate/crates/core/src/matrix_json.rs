//! JSON form of dense matrices: `{rows, cols, data}` with `data` row-major.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl From<&DMatrix<f64>> for MatrixJson {
    fn from(m: &DMatrix<f64>) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            data.extend(m.row(r).iter().copied());
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        if self.rows * self.cols != self.data.len() {
            return invalid(format!(
                "matrix data has {} entries, expected {}x{}",
                self.data.len(),
                self.rows,
                self.cols
            ));
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn row_major_layout() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let j = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        assert_eq!(j, r#"{"rows":2,"cols":3,"data":[1.0,2.0,3.0,4.0,5.0,6.0]}"#);
    }

    #[test]
    fn mismatched_data_rejected() {
        let j = MatrixJson { rows: 2, cols: 2, data: vec![1.0] };
        assert!(j.to_matrix().is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
            let mut rng = crate::rng::from_seed(seed);
            let m = DMatrix::from_fn(rows, cols, |_, _| rand::Rng::random_range(&mut rng, -1e3..1e3));
            let text = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
            let back: MatrixJson = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.to_matrix().unwrap(), m);
        }
    }
}
