//! Seeded factor-model markets with planted sectors.
//!
//! Stock `i` in sector `g(i)` has daily log return
//! `beta * m(t) + gamma * s_g(t) + sigma * e_i(t)` with independent standard
//! normal market, sector and idiosyncratic terms. A hub stock splits its
//! sector loading as `gamma / sqrt(2)` on each of two sectors. Prices start at
//! 100 and compound the returns, so [`crate::log_returns`] recovers them up
//! to rounding.
//!
//! Randomness comes from ChaCha8 streams: stream 0 drives the common
//! factors and stream `i + 1` the noise of stock `i`, so stocks can be
//! generated independently of each other.

use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::panel::PricePanel;

/// A stock loading on two sectors instead of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubStock {
    pub symbol: String,
    pub sectors: (usize, usize),
}

/// Parameters of the synthetic market.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSpec {
    /// Regular stocks, assigned to sectors round-robin.
    pub n_stocks: usize,
    pub n_sectors: usize,
    /// Number of price rows.
    pub days: usize,
    pub beta: f64,
    pub gamma: f64,
    pub sigma: f64,
    /// Extra stocks appended after the regular ones.
    pub hub_stocks: Vec<HubStock>,
    pub seed: u64,
}

impl Default for MarketSpec {
    fn default() -> Self {
        Self {
            n_stocks: 200,
            n_sectors: 10,
            days: 500,
            beta: 0.25,
            gamma: 0.6,
            sigma: 1.0,
            hub_stocks: Vec::new(),
            seed: 0,
        }
    }
}

impl MarketSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.n_sectors == 0 || self.n_stocks < self.n_sectors {
            return bad(format!("{} stocks cannot fill {} sectors", self.n_stocks, self.n_sectors));
        }
        if self.n_stocks + self.hub_stocks.len() < 2 {
            return bad("at least 2 stocks are required".into());
        }
        if self.days < 3 {
            return bad(format!("days = {} (at least 3 required)", self.days));
        }
        for (name, v) in [("beta", self.beta), ("gamma", self.gamma)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} = {v} must be finite and non-negative"));
            }
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad(format!("sigma = {} must be finite and positive", self.sigma));
        }
        for h in &self.hub_stocks {
            let (a, b) = h.sectors;
            if a >= self.n_sectors || b >= self.n_sectors || a == b {
                return bad(format!("hub `{}` needs two distinct sectors below {}", h.symbol, self.n_sectors));
            }
        }
        Ok(())
    }

    pub fn symbol(&self, i: usize) -> String {
        if i < self.n_stocks {
            format!("S{:02}_{:03}", i % self.n_sectors, i)
        } else {
            self.hub_stocks[i - self.n_stocks].symbol.clone()
        }
    }

    pub fn sector_label(sector: usize) -> String {
        format!("SEC{sector:02}")
    }

    /// Sector of each regular stock (`i % n_sectors`).
    pub fn sector_of(&self, i: usize) -> usize {
        i % self.n_sectors
    }

    /// Symbol -> label; hubs get `HUB`.
    pub fn labels(&self) -> BTreeMap<String, String> {
        let mut labels: BTreeMap<String, String> =
            (0..self.n_stocks).map(|i| (self.symbol(i), Self::sector_label(self.sector_of(i)))).collect();
        for h in &self.hub_stocks {
            labels.insert(h.symbol.clone(), "HUB".into());
        }
        labels
    }

    /// Model correlation of two regular stocks in the same sector.
    pub fn expected_intra_correlation(&self) -> f64 {
        let b2 = self.beta * self.beta;
        let g2 = self.gamma * self.gamma;
        (b2 + g2) / (b2 + g2 + self.sigma * self.sigma)
    }

    /// Model correlation of two regular stocks in different sectors.
    pub fn expected_inter_correlation(&self) -> f64 {
        let b2 = self.beta * self.beta;
        b2 / (b2 + self.gamma * self.gamma + self.sigma * self.sigma)
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn business_days(count: usize) -> Vec<NaiveDate> {
    let mut d = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d.succ_opt().expect("date in range");
    }
    out
}

/// Generates the price panel, with sector labels attached.
pub fn generate_panel(spec: &MarketSpec) -> Result<PricePanel> {
    spec.validate()?;
    let steps = spec.days - 1;
    let mut factors = stream(spec.seed, 0);
    // Row t: market factor then one value per sector.
    let common: Vec<Vec<f64>> =
        (0..steps).map(|_| (0..=spec.n_sectors).map(|_| StandardNormal.sample(&mut factors)).collect()).collect();

    let total = spec.n_stocks + spec.hub_stocks.len();
    let hub_loading = spec.gamma / std::f64::consts::SQRT_2;
    let columns: Vec<Vec<f64>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut noise = stream(spec.seed, i as u64 + 1);
            let mut log_price = 0.0;
            let mut col = Vec::with_capacity(spec.days);
            col.push(100.0);
            for f in &common {
                let sector_part = if i < spec.n_stocks {
                    spec.gamma * f[1 + spec.sector_of(i)]
                } else {
                    let (a, b) = spec.hub_stocks[i - spec.n_stocks].sectors;
                    hub_loading * (f[1 + a] + f[1 + b])
                };
                let e: f64 = StandardNormal.sample(&mut noise);
                log_price += spec.beta * f[0] + sector_part + spec.sigma * e;
                col.push(100.0 * log_price.exp());
            }
            col
        })
        .collect();

    let mut prices = Vec::with_capacity(total * spec.days);
    for t in 0..spec.days {
        prices.extend(columns.iter().map(|c| c[t]));
    }
    let symbols = (0..total).map(|i| spec.symbol(i)).collect();
    Ok(PricePanel::new(business_days(spec.days), symbols, prices)?.with_labels(spec.labels()))
}
