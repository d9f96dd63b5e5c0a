use nalgebra::DMatrix;

/// CSV precision: 17 significant digits, enough to round-trip an f64.
pub fn csv(x: f64) -> String {
    format!("{x:.16e}")
}

/// Human precision: 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // exponent after rounding, so 0.0999999 becomes 0.100000
    let sci = format!("{x:.5e}");
    let e: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-4..6).contains(&e) {
        let dec = (5 - e).max(0) as usize;
        format!("{x:.dec$}")
    } else {
        format!("{x:.5e}")
    }
}

/// JSON rows; serde_json writes the shortest round-tripping decimal.
pub fn matrix_json(m: &DMatrix<f64>) -> String {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    serde_json::to_string(&rows).expect("finite matrix")
}

pub fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| csv(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `key value` lines, keys padded to a common width.
pub fn kv(pairs: &[(&str, String)]) -> String {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(2.8), "2.80000");
        assert_eq!(sig6(123456.0), "123456");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(-0.001234567), "-0.00123457");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(0.09999999999), "0.100000");
        assert_eq!(sig6(999999.7), "1.00000e6");
    }

    #[test]
    fn csv_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.0e-300, 12345.678] {
            assert_eq!(csv(x).parse::<f64>().unwrap(), x);
        }
    }
}
