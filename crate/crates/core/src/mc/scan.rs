use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Records of a finite sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordScan {
    /// 1-based positions of the records; also the arrival times T(1), T(2), ….
    pub record_indices: Vec<usize>,
    pub record_values: Vec<f64>,
}

impl RecordScan {
    pub fn arrival_times(&self) -> &[usize] {
        &self.record_indices
    }

    /// Increments between consecutive records, with the first record itself
    /// as the leading term.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.record_values
            .iter()
            .map(|&v| {
                let d = v - prev;
                prev = v;
                d
            })
            .collect()
    }

    pub fn is_record(&self, m: usize) -> bool {
        self.record_indices.binary_search(&m).is_ok()
    }
}

/// Position m is a record iff its value strictly exceeds every earlier value.
/// Ties do not count.
pub fn scan_records(sequence: &[f64]) -> Result<RecordScan> {
    let (&first, rest) = sequence
        .split_first()
        .ok_or(Error::Empty("record scan needs a nonempty sequence"))?;
    let mut scan = RecordScan {
        record_indices: vec![1],
        record_values: vec![first],
    };
    let mut max = first;
    for (i, &x) in rest.iter().enumerate() {
        if x > max {
            max = x;
            scan.record_indices.push(i + 2);
            scan.record_values.push(x);
        }
    }
    Ok(scan)
}
