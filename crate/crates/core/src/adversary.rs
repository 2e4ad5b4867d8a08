//! Payoff sequences: the smoothed oblivious adversary, the adaptive
//! worst-case adversary, and gap/covering statistics on sampled points.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::piecewise::{Interval, PiecewiseConstantFn};

/// Where the `k - 1` breakpoint windows are centred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorMode {
    /// Centres at `i/k` every round.
    Fixed,
    /// Fresh uniform centres every round.
    Random,
}

/// How piece values are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueMode {
    /// Uniform values, with piece `k/2` raised to `0.9 + 0.1 U`.
    Biased,
    Uniform,
    /// `1, 0, 1, 0, ...` from the left.
    Alternating,
}

impl FromStr for AnchorMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(AnchorMode::Fixed),
            "random" => Ok(AnchorMode::Random),
            _ => Err(Error::domain(format!("unknown anchor mode {s:?}"))),
        }
    }
}

impl fmt::Display for AnchorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnchorMode::Fixed => "fixed",
            AnchorMode::Random => "random",
        })
    }
}

impl FromStr for ValueMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "biased" => Ok(ValueMode::Biased),
            "uniform" => Ok(ValueMode::Uniform),
            "alternating" => Ok(ValueMode::Alternating),
            _ => Err(Error::domain(format!("unknown value mode {s:?}"))),
        }
    }
}

impl fmt::Display for ValueMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueMode::Biased => "biased",
            ValueMode::Uniform => "uniform",
            ValueMode::Alternating => "alternating",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedAdversaryConfig {
    pub k: usize,
    pub sigma: f64,
    pub anchors: AnchorMode,
    pub values: ValueMode,
    pub seed: u64,
}

impl Default for SmoothedAdversaryConfig {
    fn default() -> Self {
        SmoothedAdversaryConfig {
            k: 5,
            sigma: 10.0,
            anchors: AnchorMode::Fixed,
            values: ValueMode::Biased,
            seed: 0,
        }
    }
}

impl SmoothedAdversaryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::domain("k must be at least 1"));
        }
        if !(self.sigma >= 1.0 && self.sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be finite and >= 1, got {}", self.sigma)));
        }
        Ok(())
    }

    /// Flat `key = value` block.
    pub fn to_text(&self) -> String {
        format!(
            "k = {}\nsigma = {}\nanchors = {}\nvalues = {}\nseed = {}\n",
            self.k, self.sigma, self.anchors, self.values, self.seed
        )
    }

    /// Parses a `key = value` block. Missing keys keep their defaults; `#`
    /// starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = SmoothedAdversaryConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected key = value"))?;
            let value = value.trim();
            let bad = |e: &dyn fmt::Display| Error::parse(line_no, format!("{}: {e}", key.trim()));
            match key.trim() {
                "k" => cfg.k = value.parse().map_err(|e| bad(&e))?,
                "sigma" => cfg.sigma = value.parse().map_err(|e| bad(&e))?,
                "anchors" => cfg.anchors = value.parse().map_err(|e| bad(&e))?,
                "values" => cfg.values = value.parse().map_err(|e| bad(&e))?,
                "seed" => cfg.seed = value.parse().map_err(|e| bad(&e))?,
                other => return Err(Error::parse(line_no, format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Support of the breakpoint distribution centred at `center`: a window of
    /// width `1/sigma`, shifted inward when it would leave `[0,1]`.
    pub fn window(&self, center: f64) -> Interval {
        let width = 1.0 / self.sigma;
        let low = (center - width / 2.0).clamp(0.0, 1.0 - width);
        Interval::new(low, low + width)
    }
}

/// Draws one smoothed payoff function from `rng`.
pub fn smoothed_round<R: Rng + ?Sized>(cfg: &SmoothedAdversaryConfig, rng: &mut R) -> PiecewiseConstantFn {
    let k = cfg.k;
    let mut cuts = Vec::with_capacity(k + 1);
    cuts.push(0.0);
    for i in 1..k {
        let center = match cfg.anchors {
            AnchorMode::Fixed => i as f64 / k as f64,
            AnchorMode::Random => rng.random::<f64>(),
        };
        let w = cfg.window(center);
        cuts.push(loop {
            let x = w.low + w.len() * rng.random::<f64>();
            if x > 0.0 && x < 1.0 {
                break x;
            }
        });
    }
    cuts[1..].sort_by(f64::total_cmp);
    cuts.push(1.0);

    let mut values: Vec<f64> = match cfg.values {
        ValueMode::Uniform | ValueMode::Biased => (0..k).map(|_| rng.random::<f64>()).collect(),
        ValueMode::Alternating => (0..k).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect(),
    };
    if cfg.values == ValueMode::Biased {
        values[k / 2] = (0.9 + 0.1 * rng.random::<f64>()).min(1.0);
    }

    // Coincident breakpoints leave an empty piece; drop it with its value.
    let mut i = 1;
    while i < cuts.len() {
        if cuts[i] == cuts[i - 1] {
            cuts.remove(i);
            values.remove(i - 1);
        } else {
            i += 1;
        }
    }
    PiecewiseConstantFn::new(cuts, values).expect("generated function is well formed")
}

/// Oblivious smoothed adversary: round `t` is a pure function of
/// `(config, t)`.
#[derive(Debug, Clone)]
pub struct SmoothedAdversary {
    config: SmoothedAdversaryConfig,
}

impl SmoothedAdversary {
    pub fn new(config: SmoothedAdversaryConfig) -> Result<Self> {
        config.validate()?;
        Ok(SmoothedAdversary { config })
    }

    pub fn config(&self) -> &SmoothedAdversaryConfig {
        &self.config
    }

    pub fn round(&self, t: u64) -> PiecewiseConstantFn {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(t);
        smoothed_round(&self.config, &mut rng)
    }
}

/// Adaptive adversary forcing linear regret on any learner. It keeps an
/// interval `[l, u)` on which every round so far paid 1 and halves it
/// each round with a fair coin.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseAdversary {
    low: f64,
    high: f64,
    round: usize,
}

impl Default for WorstCaseAdversary {
    fn default() -> Self {
        Self::new()
    }
}

impl WorstCaseAdversary {
    pub fn new() -> Self {
        WorstCaseAdversary {
            low: 0.0,
            high: 1.0,
            round: 0,
        }
    }

    pub fn rounds(&self) -> usize {
        self.round
    }

    /// Interval on which the cumulative payoff equals the round count.
    pub fn surviving(&self) -> Interval {
        Interval::new(self.low, self.high)
    }

    pub fn next_round<R: Rng + ?Sized>(&mut self, rng: &mut R) -> PiecewiseConstantFn {
        let upper = rng.random_bool(0.5);
        self.next_round_with(upper)
    }

    /// Plays the round with the coin fixed: `upper` pays on `[m, m + 1/5)`,
    /// otherwise on `[m - 1/5, m)`. Round 1 ignores the coin.
    pub fn next_round_with(&mut self, upper: bool) -> PiecewiseConstantFn {
        self.round += 1;
        let paid = if self.round == 1 {
            self.low = 0.4;
            self.high = 0.6;
            Interval::new(0.4, 0.6)
        } else {
            let (l, u) = (self.low, self.high);
            let m = l + (u - l) / 2.0;
            if m > l && m < u {
                if upper {
                    self.low = m;
                    Interval::new(m, m + 0.2)
                } else {
                    self.high = m;
                    Interval::new(m - 0.2, m)
                }
            } else {
                // No float strictly inside [l, u): both branches keep l.
                self.high = l.next_up();
                if upper {
                    Interval::new(l, l + 0.2)
                } else {
                    Interval::new(l - 0.2, self.high)
                }
            }
        };
        PiecewiseConstantFn::indicator(paid, 1.0, 0.0).expect("paid window lies inside (0,1)")
    }
}

/// Smallest distance between two of `points`.
pub fn min_pairwise_gap(points: &[f64]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::domain("need at least two points"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min))
}

/// True when every open gap between consecutive `anchors` holds a sample.
pub fn covering_check(anchors: &[f64], samples: &[f64]) -> bool {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    anchors.windows(2).all(|w| {
        let i = sorted.partition_point(|&y| y <= w[0]);
        i < sorted.len() && sorted[i] < w[1]
    })
}

/// Sample count `(1/eps)(ln(1/eps) + ln(1/delta))`, rounded up, after
/// which uniform samples hit every gap wider than `eps` with probability at
/// least `1 - delta`.
pub fn covering_sample_size(eps: f64, delta: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("eps and delta must lie in (0,1)"));
    }
    Ok(((1.0 / eps) * ((1.0 / eps).ln() + (1.0 / delta).ln())).ceil() as usize)
}
