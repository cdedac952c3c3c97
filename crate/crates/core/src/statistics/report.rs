//! Experiment summaries with named statistics and tolerance checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::EnsembleParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub statistic: String,
    pub target: f64,
    pub tolerance: f64,
}

impl Check {
    /// |statistic − target| ≤ tolerance; a missing statistic fails.
    pub fn holds(&self, statistics: &BTreeMap<String, f64>) -> bool {
        statistics
            .get(&self.statistic)
            .is_some_and(|v| (v - self.target).abs() <= self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: EnsembleParams,
    pub replicas: usize,
    pub statistics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, params: EnsembleParams, replicas: usize) -> Self {
        Self {
            name: name.into(),
            params,
            replicas,
            statistics: BTreeMap::new(),
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Records a statistic. Non-finite values are stored as the largest
    /// finite magnitude so reports stay valid JSON; any check on them fails.
    pub fn insert(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        let value = if value.is_nan() {
            f64::MAX
        } else {
            value.clamp(f64::MIN, f64::MAX)
        };
        self.statistics.insert(key.into(), value);
        self.reevaluate();
        self
    }

    pub fn check(&mut self, statistic: impl Into<String>, target: f64, tolerance: f64) -> &mut Self {
        let statistic = statistic.into();
        self.statistics.insert(format!("{statistic}_target"), target);
        self.statistics.insert(format!("{statistic}_tolerance"), tolerance);
        self.checks.push(Check {
            statistic,
            target,
            tolerance,
        });
        self.reevaluate();
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.statistics.get(key).copied()
    }

    fn reevaluate(&mut self) {
        self.pass = self.checks.iter().all(|c| c.holds(&self.statistics));
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.holds(&self.statistics)).collect()
    }
}
