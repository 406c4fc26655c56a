use crate::error::{Error, Result};

/// Elementary symmetric functions `e_0..=e_n` of `values`.
///
/// One pass per value of the recurrence `e_j <- e_j + v e_{j-1}` (descending
/// `j`), so the cost is `O(|values| n)`.
pub fn elementary_symmetric(values: &[f64], n: usize) -> Result<Vec<f64>> {
    if n > values.len() {
        return Err(Error::OrderExceedsSetSize { order: n, len: values.len() });
    }
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, &v) in values.iter().enumerate() {
        let top = (i + 1).min(n);
        for j in (1..=top).rev() {
            e[j] += v * e[j - 1];
        }
    }
    Ok(e)
}

/// Table `t[i][j] = e_j(values[i..])` for all suffixes, `j <= len - i`.
///
/// Used for sequential conditional subset sampling.
pub fn suffix_esf_table(values: &[f64]) -> Vec<Vec<f64>> {
    let m = values.len();
    let mut table = vec![vec![0.0; m + 1]; m + 1];
    table[m][0] = 1.0;
    for i in (0..m).rev() {
        table[i][0] = 1.0;
        for j in 1..=(m - i) {
            table[i][j] = table[i + 1][j] + values[i] * table[i + 1][j - 1];
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_small() {
        assert_eq!(elementary_symmetric(&[], 0).unwrap(), vec![1.0]);
        let e = elementary_symmetric(&[0.2, 0.5], 2).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-15);
        assert!((e[1] - 0.7).abs() < 1e-15);
        assert!((e[2] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn order_too_large() {
        assert!(matches!(elementary_symmetric(&[1.0], 2), Err(Error::OrderExceedsSetSize { order: 2, len: 1 })));
    }

    #[test]
    fn suffix_table_matches_direct() {
        let v = [0.3, 0.1, 0.9, 0.4];
        let t = suffix_esf_table(&v);
        for i in 0..=v.len() {
            let direct = elementary_symmetric(&v[i..], v.len() - i).unwrap();
            for (j, d) in direct.iter().enumerate() {
                assert!((t[i][j] - d).abs() < 1e-14);
            }
        }
    }
}
