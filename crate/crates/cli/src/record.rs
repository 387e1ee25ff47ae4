use cfcomm::{OutcomeDistribution, ProtocolConfig};
use serde::Serialize;

use crate::values::fmt_f64;

pub const CSV_HEADER: &str = "K,delta,bob,final_block,p_D0,p_D1,p_D3,p_loss_total,p_D1_renorm";

/// One protocol run as reported by `run` and `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    #[serde(rename = "K")]
    pub k: usize,
    pub delta: f64,
    pub bob: String,
    pub include_final_block: bool,
    #[serde(rename = "p_D0")]
    pub p_d0: f64,
    #[serde(rename = "p_D1")]
    pub p_d1: f64,
    #[serde(rename = "p_D3")]
    pub p_d3: f64,
    pub p_loss_total: f64,
    /// `p_D1 / (1 - p_D3)`: success rate when D3 counts are aborted and retried.
    #[serde(rename = "p_D1_renormalized", skip_serializing_if = "Option::is_none")]
    pub p_d1_renormalized: Option<f64>,
}

impl RunRecord {
    pub fn new(config: &ProtocolConfig, dist: &OutcomeDistribution) -> Self {
        Self {
            k: config.k(),
            delta: config.delta(),
            bob: config.bob().to_string(),
            include_final_block: config.include_final_block(),
            p_d0: dist.p_d0,
            p_d1: dist.p_d1,
            p_d3: dist.p_d3,
            p_loss_total: dist.p_loss_total(),
            p_d1_renormalized: (dist.p_d3 < 1.0).then(|| dist.p_d1 / (1.0 - dist.p_d3)),
        }
    }

    pub fn csv_row(&self) -> String {
        let renorm = self.p_d1_renormalized.map(fmt_f64).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.k,
            fmt_f64(self.delta),
            self.bob,
            self.include_final_block,
            fmt_f64(self.p_d0),
            fmt_f64(self.p_d1),
            fmt_f64(self.p_d3),
            fmt_f64(self.p_loss_total),
            renorm,
        )
    }
}

pub fn csv_document(records: &[RunRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cfcomm::protocol::run;
    use cfcomm::BobAction;

    #[test]
    fn renormalized_column() {
        let c = ProtocolConfig::new(2, 0.0, BobAction::Block).unwrap();
        let r = RunRecord::new(&c, &run(&c).1);
        assert!((r.p_d1_renormalized.unwrap() - 0.25 / 0.75).abs() < 1e-12);
        assert_eq!(r.csv_row().split(',').count(), 9);
    }

    #[test]
    fn renormalized_column_omitted_when_everything_aborts() {
        let c = ProtocolConfig::new(1, 0.0, BobAction::Block).unwrap();
        let r = RunRecord::new(&c, &run(&c).1);
        assert_eq!(r.p_d3, 1.0);
        assert_eq!(r.p_d1_renormalized, None);
        assert!(r.csv_row().ends_with(','));
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("p_D1_renormalized").is_none());
    }
}
