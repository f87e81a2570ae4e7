//! End-to-end two-photon transmission for three network topologies.
//!
//! * **A**: one violet photon is down-converted, travels the full distance in
//!   telecom fiber and is up-converted at the far node; the partner photon is local.
//! * **B**: both photons are down-converted and each travels half the
//!   distance to a symmetric midpoint.
//! * **C**: no interface; one violet photon travels the full distance.
//!
//! Coupling and detection losses are excluded. Every probability is carried
//! as a base-10 logarithm so that 50+ orders of magnitude never underflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fiber attenuation at 422 nm (SM400), an upper bound.
pub const DEFAULT_ALPHA_BLUE_DB_PER_KM: f64 = 50.0;
/// Fiber attenuation at 1550 nm (SMF-28), an upper bound.
pub const DEFAULT_ALPHA_IR_DB_PER_KM: f64 = 0.18;

/// A probability stored as `log10(p)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Log10Prob(pub f64);

impl Log10Prob {
    pub const ONE: Log10Prob = Log10Prob(0.0);

    pub fn from_linear(p: f64) -> Self {
        Log10Prob(p.log10())
    }

    pub fn log10(self) -> f64 {
        self.0
    }

    /// Linear value clamped to [0, 1]. Underflows to zero below ~1e−308.
    pub fn linear(self) -> f64 {
        10f64.powf(self.0).clamp(0.0, 1.0)
    }

    /// Scientific notation computed from the logarithm, e.g. `1.000000e-500`.
    pub fn to_scientific(self, digits: usize) -> String {
        if self.0 == f64::NEG_INFINITY {
            return format!("{:.*}e0", digits, 0.0);
        }
        let clamped = self.0.min(0.0);
        let mut exponent = clamped.floor();
        let mut mantissa = 10f64.powf(clamped - exponent);
        // Rounding can carry the mantissa up to 10.
        let scale = 10f64.powi(digits as i32);
        if (mantissa * scale).round() / scale >= 10.0 {
            mantissa /= 10.0;
            exponent += 1.0;
        }
        format!("{:.*}e{}", digits, mantissa, exponent as i64)
    }
}

// Multiplying probabilities adds their logarithms.
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Mul for Log10Prob {
    type Output = Log10Prob;

    fn mul(self, rhs: Log10Prob) -> Log10Prob {
        Log10Prob(self.0 + rhs.0)
    }
}

/// `log10` of the fiber transmission `10^(−α·L/10)`.
pub fn fiber_transmission_log10(alpha_db_per_km: f64, length_km: f64) -> Result<Log10Prob> {
    if !(alpha_db_per_km >= 0.0 && length_km >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "attenuation and length must be non-negative, got {alpha_db_per_km} dB/km, {length_km} km"
        )));
    }
    Ok(Log10Prob(-alpha_db_per_km * length_km / 10.0))
}

/// Linear fiber transmission `10^(−α·L/10)`.
pub fn fiber_transmission(alpha_db_per_km: f64, length_km: f64) -> Result<f64> {
    fiber_transmission_log10(alpha_db_per_km, length_km).map(Log10Prob::linear)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkScenario {
    pub topology: Topology,
    pub distance_km: f64,
    pub alpha_blue_db_per_km: f64,
    pub alpha_ir_db_per_km: f64,
    /// Down-conversion (DFG) efficiency.
    pub eta_down: f64,
    /// Up-conversion (SFG) efficiency.
    pub eta_up: f64,
}

impl LinkScenario {
    pub fn new(
        topology: Topology,
        distance_km: f64,
        alpha_blue_db_per_km: f64,
        alpha_ir_db_per_km: f64,
        eta_down: f64,
        eta_up: f64,
    ) -> Result<Self> {
        LinkScenario {
            topology,
            distance_km,
            alpha_blue_db_per_km,
            alpha_ir_db_per_km,
            eta_down,
            eta_up,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.distance_km >= 0.0) || !self.distance_km.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "distance must be non-negative, got {} km",
                self.distance_km
            )));
        }
        if !(self.alpha_blue_db_per_km >= 0.0 && self.alpha_ir_db_per_km >= 0.0) {
            return Err(Error::InvalidParameter(
                "attenuations must be non-negative".into(),
            ));
        }
        let unit = 0.0..=1.0;
        if !unit.contains(&self.eta_down) || !unit.contains(&self.eta_up) {
            return Err(Error::InvalidParameter(format!(
                "conversion efficiencies must lie in [0, 1], got down {} up {}",
                self.eta_down, self.eta_up
            )));
        }
        Ok(self)
    }

    pub fn with_topology(self, topology: Topology) -> Self {
        LinkScenario { topology, ..self }
    }

    pub fn with_distance(self, distance_km: f64) -> Result<Self> {
        LinkScenario {
            distance_km,
            ..self
        }
        .validated()
    }
}

/// Success probability of the scenario in log10 form.
pub fn scenario_success_log10(s: &LinkScenario) -> Result<Log10Prob> {
    let s = s.validated()?;
    let down = Log10Prob::from_linear(s.eta_down);
    let up = Log10Prob::from_linear(s.eta_up);
    Ok(match s.topology {
        Topology::A => down * fiber_transmission_log10(s.alpha_ir_db_per_km, s.distance_km)? * up,
        Topology::B => {
            let half = down * fiber_transmission_log10(s.alpha_ir_db_per_km, 0.5 * s.distance_km)?;
            half * half
        }
        Topology::C => fiber_transmission_log10(s.alpha_blue_db_per_km, s.distance_km)?,
    })
}

/// Linear success probability, clamped to [0, 1].
pub fn scenario_success(s: &LinkScenario) -> Result<f64> {
    scenario_success_log10(s).map(Log10Prob::linear)
}

/// `log10(P_a) − log10(P_c)`: orders of magnitude gained by `a` over `c`.
pub fn improvement_orders(a: &LinkScenario, c: &LinkScenario) -> Result<f64> {
    Ok(scenario_success_log10(a)?.log10() - scenario_success_log10(c)?.log10())
}

/// Distance (km) at which the converted link A and the direct link C have
/// equal success probability.
pub fn crossover_distance(template: &LinkScenario) -> Result<f64> {
    let t = template.validated()?;
    let excess = t.alpha_blue_db_per_km - t.alpha_ir_db_per_km;
    if !(excess > 0.0) {
        return Err(Error::NoCrossover {
            alpha_blue: t.alpha_blue_db_per_km,
            alpha_ir: t.alpha_ir_db_per_km,
        });
    }
    let conversion_loss_db = -10.0 * (t.eta_down.log10() + t.eta_up.log10());
    Ok(conversion_loss_db / excess)
}

/// One sweep row, probabilities in log10 form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub distance_km: f64,
    pub case_a: Log10Prob,
    pub case_b: Log10Prob,
    pub case_c: Log10Prob,
}

/// Evaluates all three topologies at each distance.
pub fn scenario_sweep(template: &LinkScenario, distances_km: &[f64]) -> Result<Vec<SweepRow>> {
    distances_km
        .iter()
        .map(|&d| {
            let s = template.with_distance(d)?;
            Ok(SweepRow {
                distance_km: d,
                case_a: scenario_success_log10(&s.with_topology(Topology::A))?,
                case_b: scenario_success_log10(&s.with_topology(Topology::B))?,
                case_c: scenario_success_log10(&s.with_topology(Topology::C))?,
            })
        })
        .collect()
}

pub const SWEEP_HEADER: [&str; 4] = ["distance_km", "p_case_a", "p_case_b", "p_case_c"];
pub const SWEEP_LOG10_HEADER: [&str; 4] = [
    "distance_km",
    "log10_p_case_a",
    "log10_p_case_b",
    "log10_p_case_c",
];

/// Writes the linear-probability sweep CSV.
pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidParameter(format!("CSV write failed: {e}"));
    w.write_record(SWEEP_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.distance_km.to_string(),
            r.case_a.to_scientific(6),
            r.case_b.to_scientific(6),
            r.case_c.to_scientific(6),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameter(format!("CSV write failed: {e}")))
}

/// Writes the log10 sweep CSV used for plotting.
pub fn write_sweep_log10_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidParameter(format!("CSV write failed: {e}"));
    w.write_record(SWEEP_LOG10_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.distance_km.to_string(),
            r.case_a.log10().to_string(),
            r.case_b.log10().to_string(),
            r.case_c.log10().to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameter(format!("CSV write failed: {e}")))
}
