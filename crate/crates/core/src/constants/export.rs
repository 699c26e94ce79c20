//! JSON export of a [`ConstantsTable`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Bounded, ConstantsTable};
use crate::error::Result;
use crate::precision::to_decimal;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub value: String,
    pub truncation_bound: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsDocument {
    pub precision_digits: u32,
    pub config_hash: String,
    pub constants: BTreeMap<String, ConstantEntry>,
}

/// Degree bound of the exported `λ_{j,k}` table.
pub const LAMBDA_EXPORT_MAX_K: u32 = 10;

fn entry(b: &Bounded, digits: u32) -> ConstantEntry {
    ConstantEntry {
        value: to_decimal(&b.value, digits as usize),
        truncation_bound: to_decimal(&b.err, 3),
    }
}

impl ConstantsTable {
    pub fn to_document(&self, config_hash: &str) -> Result<ConstantsDocument> {
        let digits = self.precision.digits();
        let mut out = BTreeMap::new();
        let mut put = |name: String, b: &Bounded| {
            out.insert(name, entry(b, digits));
        };
        put("gamma".into(), &self.gamma);
        put("beta".into(), &self.beta);
        put("alpha1".into(), &self.alpha1);
        let families: [(&str, &BTreeMap<u32, Bounded>); 8] = [
            ("zeta", &self.zeta),
            ("prime_zeta", &self.prime_zeta),
            ("c", &self.c),
            ("c_star", &self.c_star),
            ("nu", &self.nu),
            ("nu_star", &self.nu_star),
            ("d", &self.d),
            ("qihu_a", &self.qihu_a),
        ];
        for (name, map) in families {
            for (k, b) in map {
                put(format!("{name}.{k}"), b);
            }
        }
        for (m, b) in self.inv_gamma_taylor.range(..=self.sizes.taylor_max) {
            put(format!("inv_gamma_taylor.{m}"), b);
        }
        for (p, b) in &self.beta_p {
            put(format!("beta_p.{p}"), b);
        }
        for (p, b) in &self.delta_p {
            put(format!("delta_p.{p}"), b);
        }
        let k_max = LAMBDA_EXPORT_MAX_K.min(self.sizes.taylor_max);
        for k in 0..=k_max {
            for j in 0..=k {
                put(format!("lambda.{j}.{k}"), &self.lambda(j, k)?);
            }
        }
        Ok(ConstantsDocument {
            precision_digits: digits,
            config_hash: config_hash.to_string(),
            constants: out,
        })
    }

    pub fn to_json(&self, config_hash: &str) -> Result<String> {
        let doc = self.to_document(config_hash)?;
        Ok(serde_json::to_string_pretty(&doc).expect("string maps always serialize"))
    }
}
