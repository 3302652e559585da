//! Mirrored channel-to-frequency allocation.
//!
//! With odd `n₂` and `Zk = (n₂ + 1)/2` the polynomial has `A = n₂`, so
//! channels `n` and `n₂ − n` share the carrier index `f(n)`. Frequencies are
//! unit-less integers; composite values are flagged rather than rejected.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{HeegnerNumber, QuadraticPolynomial};
use crate::primality::is_prime_int;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChannelPair {
    pub channels: (u64, u64),
    #[serde(with = "crate::decimal::int")]
    pub frequency: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChannelPlan {
    pub n2: u64,
    #[serde(rename = "Zk")]
    pub zk: u64,
    #[serde(rename = "H")]
    pub h: HeegnerNumber,
    pub poly: QuadraticPolynomial,
    #[serde(serialize_with = "entries_as_strings")]
    pub entries: BTreeMap<u64, BigInt>,
    pub pairs: Vec<ChannelPair>,
}

fn entries_as_strings<S: serde::Serializer>(m: &BTreeMap<u64, BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, v.to_string())))
}

pub fn build_plan(n2: u64, h: HeegnerNumber) -> Result<ChannelPlan> {
    if n2 % 2 == 0 {
        return Err(Error::EvenUpperIndex(n2));
    }
    let zk = (n2 + 1) / 2;
    let poly = QuadraticPolynomial::from_zk(&BigUint::from(zk), h)?;
    let entries: BTreeMap<u64, BigInt> = (0..=n2).map(|n| (n, poly.evaluate(&BigInt::from(n)))).collect();
    let pairs = (0..=(n2 - 1) / 2)
        .map(|n| ChannelPair { channels: (n, n2 - n), frequency: entries[&n].clone() })
        .collect();
    Ok(ChannelPlan { n2, zk, h, poly, entries, pairs })
}

pub fn mirror_channel(plan: &ChannelPlan, n: u64) -> Result<u64> {
    if n > plan.n2 {
        return Err(Error::ChannelOutOfRange { channel: n, n2: plan.n2 });
    }
    Ok(plan.n2 - n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequencyEntry {
    pub pair: (u64, u64),
    #[serde(with = "crate::decimal::int")]
    pub frequency: BigInt,
    pub is_prime: bool,
}

pub fn frequency_report(plan: &ChannelPlan) -> Vec<FrequencyEntry> {
    plan.pairs
        .iter()
        .map(|p| FrequencyEntry { pair: p.channels, frequency: p.frequency.clone(), is_prime: is_prime_int(&p.frequency) })
        .collect()
}

/// JSON document with the plan header and the per-pair report.
pub fn export_plan_json(plan: &ChannelPlan) -> Result<Vec<u8>> {
    #[derive(Serialize)]
    struct Doc<'a> {
        n2: u64,
        #[serde(rename = "Zk")]
        zk: u64,
        #[serde(rename = "H")]
        h: HeegnerNumber,
        polynomial: String,
        poly: &'a QuadraticPolynomial,
        pairs: Vec<FrequencyEntry>,
    }
    let doc = Doc {
        n2: plan.n2,
        zk: plan.zk,
        h: plan.h,
        polynomial: plan.poly.to_string(),
        poly: &plan.poly,
        pairs: frequency_report(plan),
    };
    let mut out = serde_json::to_vec_pretty(&doc)?;
    out.push(b'\n');
    Ok(out)
}
