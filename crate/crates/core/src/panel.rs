//! Price panels, log returns, correlation and distance matrices.

use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Minimum number of price rows in a panel.
pub const MIN_ROWS: usize = 3;

/// Aligned, date-indexed closing prices for `N` symbols.
///
/// Prices are stored row-major (`T` rows of `N` values). Every price is
/// strictly positive and finite, dates strictly increase, `N >= 2` and
/// `T >= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePanel {
    dates: Vec<NaiveDate>,
    symbols: Vec<String>,
    prices: Vec<f64>,
    sector_labels: Option<BTreeMap<String, String>>,
}

impl PricePanel {
    /// Validates and builds a panel from row-major prices.
    pub fn new(dates: Vec<NaiveDate>, symbols: Vec<String>, prices: Vec<f64>) -> Result<Self> {
        let n = symbols.len();
        if n < 2 {
            return Err(Error::TooFewSymbols(n));
        }
        let mut seen = HashSet::with_capacity(n);
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        if dates.len() < MIN_ROWS {
            return Err(Error::TooFewRows { rows: dates.len(), min: MIN_ROWS });
        }
        assert_eq!(prices.len(), dates.len() * n, "price matrix shape does not match dates x symbols");
        for (t, w) in dates.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::DatesNotIncreasing { line: t as u64 + 3 });
            }
        }
        for (k, &p) in prices.iter().enumerate() {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::NonPositivePrice {
                    line: (k / n) as u64 + 2,
                    symbol: symbols[k % n].clone(),
                    value: p,
                });
            }
        }
        Ok(Self { dates, symbols, prices, sector_labels: None })
    }

    /// Attaches a symbol -> sector label map.
    pub fn with_labels(mut self, labels: BTreeMap<String, String>) -> Self {
        self.sector_labels = Some(labels);
        self
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn sector_labels(&self) -> Option<&BTreeMap<String, String>> {
        self.sector_labels.as_ref()
    }

    pub fn n_rows(&self) -> usize {
        self.dates.len()
    }

    pub fn n_symbols(&self) -> usize {
        self.symbols.len()
    }

    /// Price of symbol `i` on row `t`.
    pub fn price(&self, t: usize, i: usize) -> f64 {
        self.prices[t * self.symbols.len() + i]
    }

    pub fn row(&self, t: usize) -> &[f64] {
        let n = self.symbols.len();
        &self.prices[t * n..(t + 1) * n]
    }

    /// Sub-panel made of rows `start..end`. Labels are carried over.
    pub fn slice_rows(&self, start: usize, end: usize) -> Result<Self> {
        let n = self.symbols.len();
        let mut out =
            Self::new(self.dates[start..end].to_vec(), self.symbols.clone(), self.prices[start * n..end * n].to_vec())?;
        out.sector_labels = self.sector_labels.clone();
        Ok(out)
    }

    /// Writes the panel as wide CSV. Prices use the shortest representation
    /// that parses back to the same `f64`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::with_capacity(self.symbols.len() + 1);
        header.push("date".to_string());
        header.extend(self.symbols.iter().cloned());
        w.write_record(&header)?;
        for t in 0..self.n_rows() {
            let mut rec = Vec::with_capacity(self.symbols.len() + 1);
            rec.push(self.dates[t].format("%Y-%m-%d").to_string());
            rec.extend(self.row(t).iter().map(|p| p.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Ingestion options for [`load_panel`].
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Drop whole rows that contain an empty cell instead of failing.
    pub drop_incomplete_rows: bool,
}

/// Reads a wide-format CSV price panel: first column an ISO-8601 date, one
/// column per symbol. Lines starting with `#` are ignored.
pub fn load_panel<R: Read>(source: R, options: LoadOptions) -> Result<PricePanel> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(source);
    let header = rdr.headers()?.clone();
    let symbols: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut seen = HashSet::new();
    for s in &symbols {
        if !seen.insert(s.as_str()) {
            return Err(Error::DuplicateSymbol(s.clone()));
        }
    }
    if symbols.len() < 2 {
        return Err(Error::TooFewSymbols(symbols.len()));
    }

    let mut dates = Vec::new();
    let mut prices = Vec::new();
    let mut row = Vec::with_capacity(symbols.len());
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != symbols.len() + 1 {
            return Err(Error::RaggedRow { line, found: rec.len(), expected: symbols.len() + 1 });
        }
        let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d")
            .map_err(|_| Error::InvalidDate { line, value: rec[0].to_string() })?;
        row.clear();
        let mut incomplete = false;
        for (cell, symbol) in rec.iter().skip(1).zip(&symbols) {
            if cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan") {
                if options.drop_incomplete_rows {
                    incomplete = true;
                    break;
                }
                return Err(Error::MissingCell { line, symbol: symbol.clone() });
            }
            let value: f64 = cell.parse().map_err(|_| Error::NonNumericPrice {
                line,
                symbol: symbol.clone(),
                cell: cell.to_string(),
            })?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositivePrice { line, symbol: symbol.clone(), value });
            }
            row.push(value);
        }
        if incomplete {
            continue;
        }
        if let Some(&prev) = dates.last() {
            if date <= prev {
                return Err(Error::DatesNotIncreasing { line });
            }
        }
        dates.push(date);
        prices.extend_from_slice(&row);
    }
    PricePanel::new(dates, symbols, prices)
}

/// Reads a `symbol,label` CSV.
pub fn load_labels<R: Read>(source: R) -> Result<BTreeMap<String, String>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(source);
    let mut labels = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() >= 2 {
            labels.insert(rec[0].to_string(), rec[1].to_string());
        }
    }
    Ok(labels)
}

/// Writes a `symbol,label` CSV in symbol order.
pub fn write_labels<W: Write>(labels: &BTreeMap<String, String>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["symbol", "label"])?;
    for (s, l) in labels {
        w.write_record([s, l])?;
    }
    w.flush()?;
    Ok(())
}

/// Logarithmic returns, one column per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMatrix {
    symbols: Vec<String>,
    dates: Vec<NaiveDate>,
    columns: Vec<Vec<f64>>,
    lag: usize,
}

impl ReturnMatrix {
    /// Builds a return matrix directly from per-symbol columns. All columns
    /// must have the same length and only finite values.
    pub fn from_columns(symbols: Vec<String>, columns: Vec<Vec<f64>>, lag: usize) -> Result<Self> {
        if symbols.len() < 2 || symbols.len() != columns.len() {
            return Err(Error::TooFewSymbols(symbols.len().min(columns.len())));
        }
        let rows = columns[0].len();
        assert!(columns.iter().all(|c| c.len() == rows), "ragged return columns");
        assert!(columns.iter().flatten().all(|r| r.is_finite()), "non-finite return");
        Ok(Self { symbols, dates: Vec::new(), columns, lag })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Dates at the end of each return interval (empty when built from raw columns).
    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    pub fn get(&self, t: usize, i: usize) -> f64 {
        self.columns[i][t]
    }

    /// Writes returns as wide CSV with the end date of each interval.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["date".to_string()];
        header.extend(self.symbols.iter().cloned());
        w.write_record(&header)?;
        for t in 0..self.n_rows() {
            let mut rec = Vec::with_capacity(self.symbols.len() + 1);
            rec.push(self.dates.get(t).map_or_else(|| t.to_string(), |d| d.format("%Y-%m-%d").to_string()));
            rec.extend(self.columns.iter().map(|c| c[t].to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `r_i(t) = ln P_i(t + lag) - ln P_i(t)` for every symbol.
pub fn log_returns(panel: &PricePanel, lag: usize) -> Result<ReturnMatrix> {
    let rows = panel.n_rows();
    if lag == 0 || lag >= rows {
        return Err(Error::InvalidLag { lag, rows });
    }
    let n = panel.n_symbols();
    let columns = (0..n)
        .map(|i| (0..rows - lag).map(|t| panel.price(t + lag, i).ln() - panel.price(t, i).ln()).collect())
        .collect();
    Ok(ReturnMatrix { symbols: panel.symbols().to_vec(), dates: panel.dates()[lag..].to_vec(), columns, lag })
}

/// Symmetric matrix of pairwise correlation coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    symbols: Vec<String>,
    rho: Vec<f64>,
}

impl CorrelationMatrix {
    /// Builds a matrix from full row-major values. The diagonal is forced to
    /// 1 and the upper triangle is mirrored into the lower one.
    pub fn from_values(symbols: Vec<String>, mut rho: Vec<f64>) -> Self {
        let n = symbols.len();
        assert_eq!(rho.len(), n * n);
        for i in 0..n {
            rho[i * n + i] = 1.0;
            for j in i + 1..n {
                rho[j * n + i] = rho[i * n + j];
            }
        }
        Self { symbols, rho }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rho[i * self.symbols.len() + j]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_matrix_csv(&self.symbols, &self.rho, out)
    }
}

/// Pearson correlation of every pair of return columns, computed from time
/// averages over the whole window:
///
/// `rho_ij = (<r_i r_j> - <r_i><r_j>) / sqrt((<r_i^2> - <r_i>^2)(<r_j^2> - <r_j>^2))`
///
/// Each column is shifted by its first value before the moments are taken
/// (the coefficient is shift invariant), which keeps the moment differences
/// well conditioned for returns with a non-zero drift.
pub fn correlation(returns: &ReturnMatrix) -> Result<CorrelationMatrix> {
    let n = returns.symbols.len();
    let rows = returns.n_rows();
    let shifted: Vec<Vec<f64>> = returns
        .columns
        .iter()
        .map(|c| {
            let origin = c.first().copied().unwrap_or(0.0);
            c.iter().map(|r| r - origin).collect()
        })
        .collect();
    let inv_t = 1.0 / rows as f64;
    let means: Vec<f64> = shifted.iter().map(|c| c.iter().sum::<f64>() * inv_t).collect();
    let vars: Vec<f64> =
        shifted.iter().zip(&means).map(|(c, m)| c.iter().map(|r| r * r).sum::<f64>() * inv_t - m * m).collect();

    let zero: Vec<String> = returns
        .columns
        .iter()
        .zip(&vars)
        .zip(&returns.symbols)
        .filter(|((c, &v), _)| v <= 0.0 || c.iter().all(|&r| r == c[0]))
        .map(|(_, s)| s.clone())
        .collect();
    if !zero.is_empty() {
        return Err(Error::ZeroVarianceColumn(zero));
    }

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let cross = shifted[i].iter().zip(&shifted[j]).map(|(a, b)| a * b).sum::<f64>() * inv_t;
                    (cross - means[i] * means[j]) / (vars[i] * vars[j]).sqrt()
                })
                .collect()
        })
        .collect();

    let mut rho = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            rho[i * n + i + 1 + off] = v;
        }
    }
    Ok(CorrelationMatrix::from_values(returns.symbols.clone(), rho))
}

/// Symmetric matrix of distances `d_ij = sqrt(2 (1 - rho_ij))`, zero on the
/// diagonal and bounded by `[0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    symbols: Vec<String>,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a distance matrix from the upper triangle of `values`; the
    /// lower triangle and the diagonal are overwritten.
    pub fn from_values(symbols: Vec<String>, mut d: Vec<f64>) -> Self {
        let n = symbols.len();
        assert_eq!(d.len(), n * n);
        for i in 0..n {
            d[i * n + i] = 0.0;
            for j in i + 1..n {
                d[j * n + i] = d[i * n + j];
            }
        }
        Self { symbols, d }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.symbols.len() + j]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_matrix_csv(&self.symbols, &self.d, out)
    }
}

/// Maps a single correlation to a distance. `rho` is clamped to `[-1, 1]`
/// first so that roundoff above 1 cannot produce `NaN`.
pub fn rho_to_distance(rho: f64) -> f64 {
    (2.0 * (1.0 - rho.clamp(-1.0, 1.0))).max(0.0).sqrt()
}

pub fn to_distance(corr: &CorrelationMatrix) -> DistanceMatrix {
    let d = corr.rho.iter().map(|&r| rho_to_distance(r)).collect();
    DistanceMatrix::from_values(corr.symbols.clone(), d)
}

/// Formats `x` as a plain decimal with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { format!("{:.*}", digits - 1, 0.0) } else { x.to_string() };
    }
    // Exponent after rounding, so 9.9999999999999 moves to the next decade.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with("-0") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        s[1..].to_string()
    } else {
        s
    }
}

fn write_matrix_csv<W: Write>(symbols: &[String], values: &[f64], out: W) -> Result<()> {
    let n = symbols.len();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(symbols)?;
    for i in 0..n {
        w.write_record(values[i * n..(i + 1) * n].iter().map(|&v| format_significant(v, 12)))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_panel(text: &str, drop: bool) -> Result<PricePanel> {
        load_panel(text.as_bytes(), LoadOptions { drop_incomplete_rows: drop })
    }

    #[test]
    fn loads_complete_panel() {
        let p =
            csv_panel("date,A,B\n2020-01-01,1,2\n2020-01-02,1.5,2\n2020-01-03,2,3\n2020-01-06,2,4\n", false).unwrap();
        assert_eq!(p.n_rows(), 4);
        assert_eq!(p.n_symbols(), 2);
        assert_eq!(p.price(1, 0), 1.5);
    }

    #[test]
    fn drops_incomplete_rows_when_asked() {
        let text = "date,A,B\n2020-01-01,1,2\n2020-01-02,,2\n2020-01-03,2,3\n2020-01-06,2,4\n";
        assert_eq!(csv_panel(text, true).unwrap().n_rows(), 3);
        assert!(matches!(csv_panel(text, false), Err(Error::MissingCell { line: 3, .. })));
    }

    #[test]
    fn rejects_bad_cells() {
        let zero = "date,A,B\n2020-01-01,1,2\n2020-01-02,0.0,2\n2020-01-03,2,3\n";
        match csv_panel(zero, false) {
            Err(Error::NonPositivePrice { line, symbol, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(symbol, "A");
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "date,A,B\n2020-01-01,1,x\n2020-01-02,1,2\n2020-01-03,2,3\n";
        assert!(matches!(csv_panel(text, false), Err(Error::NonNumericPrice { .. })));
        let dup = "date,A,A\n2020-01-01,1,2\n2020-01-02,1,2\n2020-01-03,2,3\n";
        assert!(matches!(csv_panel(dup, false), Err(Error::DuplicateSymbol(s)) if s == "A"));
        let short = "date,A,B\n2020-01-01,1,2\n2020-01-02,,2\n2020-01-03,2,3\n";
        assert!(matches!(csv_panel(short, true), Err(Error::TooFewRows { rows: 2, .. })));
        let order = "date,A,B\n2020-01-02,1,2\n2020-01-01,1,2\n2020-01-03,2,3\n";
        assert!(matches!(csv_panel(order, false), Err(Error::DatesNotIncreasing { .. })));
    }

    #[test]
    fn log_returns_of_e_series() {
        let e = std::f64::consts::E;
        let d = |k| NaiveDate::from_ymd_opt(2020, 1, k).unwrap();
        let p = PricePanel::new(vec![d(1), d(2), d(3)], vec!["A".into(), "B".into()], vec![1.0, 5.0, e, 5.0, e, 5.0])
            .unwrap();
        let r = log_returns(&p, 1).unwrap();
        assert_eq!(r.column(0), &[1.0, 0.0]);
        assert_eq!(r.column(1), &[0.0, 0.0]);
        assert!(matches!(log_returns(&p, 3), Err(Error::InvalidLag { .. })));
        assert!(matches!(log_returns(&p, 0), Err(Error::InvalidLag { .. })));
        assert_eq!(log_returns(&p, 2).unwrap().n_rows(), 1);
    }

    #[test]
    fn perfect_and_anti_correlation() {
        let a = vec![0.1, -0.3, 0.25, 0.05, -0.02];
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        let r =
            ReturnMatrix::from_columns(vec!["A".into(), "B".into(), "C".into()], vec![a.clone(), a, neg], 1).unwrap();
        let c = correlation(&r).unwrap();
        assert!((c.get(0, 1) - 1.0).abs() < 1e-12);
        assert!((c.get(0, 2) + 1.0).abs() < 1e-12);
        assert_eq!(c.get(1, 1), 1.0);
        assert_eq!(c.get(2, 0), c.get(0, 2));
    }

    #[test]
    fn zero_variance_is_an_error() {
        let r = ReturnMatrix::from_columns(
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec![0.1, 0.2, 0.3], vec![0.0; 3], vec![0.5; 3]],
            1,
        )
        .unwrap();
        match correlation(&r) {
            Err(Error::ZeroVarianceColumn(s)) => assert_eq!(s, vec!["B".to_string(), "C".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn distance_special_values() {
        assert_eq!(rho_to_distance(1.0), 0.0);
        assert_eq!(rho_to_distance(-1.0), 2.0);
        assert!((rho_to_distance(0.0) - 1.41421356).abs() < 1e-8);
        assert_eq!(rho_to_distance(1.0 + 1e-13), 0.0);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(1.0, 12), "1.00000000000");
        assert_eq!(format_significant(0.0, 12), "0.00000000000");
        assert_eq!(format_significant(std::f64::consts::SQRT_2, 12), "1.41421356237");
        assert_eq!(format_significant(-0.0123456789012345, 12), "-0.0123456789012");
        assert_eq!(format_significant(9.99999999999999, 12), "10.0000000000");
    }

    #[test]
    fn matrix_csv_layout() {
        let c = CorrelationMatrix::from_values(vec!["A".into(), "B".into()], vec![1.0, 0.5, 0.0, 1.0]);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "A,B\n1.00000000000,0.500000000000\n0.500000000000,1.00000000000\n"
        );
    }
}
