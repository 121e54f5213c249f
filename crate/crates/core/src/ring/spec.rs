use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RingError;

/// How the radicand `b` in `t² = b` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Radicand {
    Zero,
    /// `b = pʲ`
    PowerOfP(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarMode {
    /// `A = B[t; σ]/(t² − b)` with `t* = −t`.
    Quadratic,
    /// `A = B` with the identity involution.
    Trivial,
}

/// Parameters of a ring in the twisted-quadratic family over GR(p, k, d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u32,
    pub k: u32,
    pub d: u32,
    pub sigma_order: u8,
    pub radicand: Radicand,
    pub truncate_odd: bool,
    pub star_mode: StarMode,
}

impl RingSpec {
    pub fn quadratic(p: u32, k: u32, d: u32, sigma_order: u8, radicand: Radicand) -> Self {
        RingSpec {
            p,
            k,
            d,
            sigma_order,
            radicand,
            truncate_odd: false,
            star_mode: StarMode::Quadratic,
        }
    }

    pub fn trivial(p: u32, k: u32, d: u32) -> Self {
        RingSpec {
            p,
            k,
            d,
            sigma_order: 1,
            radicand: Radicand::Zero,
            truncate_odd: false,
            star_mode: StarMode::Trivial,
        }
    }

    pub fn truncated(mut self) -> Self {
        self.truncate_odd = true;
        self
    }

    pub fn validate(&self) -> Result<(), RingError> {
        let bad = |msg: String| Err(RingError::InvalidSpec(msg));
        if self.p < 3 || !is_prime(self.p) {
            return bad(format!("p={} must be an odd prime", self.p));
        }
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if self.d == 0 {
            return bad("d must be positive".into());
        }
        if self.sigma_order != 1 && self.sigma_order != 2 {
            return bad(format!("sigma_order={} must be 1 or 2", self.sigma_order));
        }
        if self.sigma_order == 2 && !self.d.is_multiple_of(2) {
            return bad(format!("sigma_order=2 needs even d, got d={}", self.d));
        }
        if let Radicand::PowerOfP(j) = self.radicand {
            if j == 0 || j > self.k {
                return bad(format!("b_exponent={j} must lie in 1..={}", self.k));
            }
        }
        match self.star_mode {
            StarMode::Trivial => {
                if self.sigma_order != 1 {
                    return bad("star_mode=trivial forces sigma_order=1".into());
                }
                if self.truncate_odd {
                    return bad("truncate_odd needs star_mode=quadratic".into());
                }
            }
            StarMode::Quadratic => {
                if self.truncate_odd && (self.radicand != Radicand::PowerOfP(1) || self.k < 2) {
                    return bad("truncate_odd needs b_exponent=1 and k >= 2".into());
                }
            }
        }
        Ok(())
    }

    /// Parses the `key=value` format, one key per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, RingError> {
        let mut builder = SpecBuilder::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            builder.apply_line(line, lineno + 1)?;
        }
        builder.finish()
    }

    /// Human-readable name such as `GR(9,1)[t]/(t^2-3)`.
    pub fn label(&self) -> String {
        let base = format!("GR({},{})", self.p.pow(self.k), self.d);
        match self.star_mode {
            StarMode::Trivial => format!("{base}, *=id"),
            StarMode::Quadratic => {
                let twist = if self.sigma_order == 2 { "[t;σ]" } else { "[t]" };
                let b = match self.radicand {
                    Radicand::Zero => "t^2".to_string(),
                    Radicand::PowerOfP(j) => format!("t^2-{}", self.p.pow(j)),
                };
                if self.truncate_odd {
                    format!("{base}{twist}/({b},t^{})", 2 * self.k - 1)
                } else {
                    format!("{base}{twist}/({b})")
                }
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p={}", self.p)?;
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "d={}", self.d)?;
        writeln!(f, "sigma_order={}", self.sigma_order)?;
        match self.radicand {
            Radicand::Zero => writeln!(f, "b=zero")?,
            Radicand::PowerOfP(j) => writeln!(f, "b_exponent={j}")?,
        }
        writeln!(f, "truncate_odd={}", self.truncate_odd)?;
        let star = match self.star_mode {
            StarMode::Quadratic => "quadratic",
            StarMode::Trivial => "trivial",
        };
        writeln!(f, "star_mode={star}")
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RingSpec::parse(s)
    }
}

/// Accumulates `key=value` lines; shared with the sweep-file reader.
#[derive(Debug, Default, Clone)]
pub struct SpecBuilder {
    p: Option<u32>,
    k: Option<u32>,
    d: Option<u32>,
    sigma_order: Option<u8>,
    radicand: Option<Radicand>,
    truncate_odd: Option<bool>,
    star_mode: Option<StarMode>,
}

impl SpecBuilder {
    pub fn is_empty(&self) -> bool {
        self.p.is_none()
            && self.k.is_none()
            && self.d.is_none()
            && self.sigma_order.is_none()
            && self.radicand.is_none()
            && self.truncate_odd.is_none()
            && self.star_mode.is_none()
    }

    pub fn apply_line(&mut self, line: &str, lineno: usize) -> Result<(), RingError> {
        let (key, value) = line.split_once('=').ok_or_else(|| {
            RingError::InvalidSpec(format!("line {lineno}: expected key=value, got `{line}`"))
        })?;
        self.apply(key.trim(), value.trim(), lineno)
    }

    pub fn apply(&mut self, key: &str, value: &str, lineno: usize) -> Result<(), RingError> {
        let err = |what: &str| {
            RingError::InvalidSpec(format!("line {lineno}: key `{key}`: {what} (got `{value}`)"))
        };
        let int = |v: &str| v.parse::<u32>().map_err(|_| err("expected a nonnegative integer"));
        match key {
            "p" => self.p = Some(int(value)?),
            "k" => self.k = Some(int(value)?),
            "d" => self.d = Some(int(value)?),
            "sigma_order" => {
                self.sigma_order = Some(match value {
                    "1" => 1,
                    "2" => 2,
                    _ => return Err(err("expected 1 or 2")),
                })
            }
            "b_exponent" => self.radicand = Some(Radicand::PowerOfP(int(value)?)),
            "b" => {
                if value == "zero" || value == "0" {
                    self.radicand = Some(Radicand::Zero)
                } else {
                    return Err(err("expected `zero`; use b_exponent=j for b = p^j"));
                }
            }
            "truncate_odd" => {
                self.truncate_odd = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(err("expected true or false")),
                })
            }
            "star_mode" => {
                self.star_mode = Some(match value {
                    "quadratic" => StarMode::Quadratic,
                    "trivial" => StarMode::Trivial,
                    _ => return Err(err("expected quadratic or trivial")),
                })
            }
            _ => {
                return Err(RingError::InvalidSpec(format!(
                    "line {lineno}: unknown key `{key}`"
                )))
            }
        }
        Ok(())
    }

    pub fn finish(&self) -> Result<RingSpec, RingError> {
        let missing = |k: &str| RingError::InvalidSpec(format!("missing key `{k}`"));
        let star_mode = self.star_mode.unwrap_or(StarMode::Quadratic);
        let radicand = match (self.radicand, star_mode) {
            (Some(r), _) => r,
            (None, StarMode::Trivial) => Radicand::Zero,
            (None, StarMode::Quadratic) => return Err(missing("b_exponent` or `b")),
        };
        let spec = RingSpec {
            p: self.p.ok_or_else(|| missing("p"))?,
            k: self.k.ok_or_else(|| missing("k"))?,
            d: self.d.ok_or_else(|| missing("d"))?,
            sigma_order: self.sigma_order.unwrap_or(1),
            radicand,
            truncate_odd: self.truncate_odd.unwrap_or(false),
            star_mode,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}
