//! Golden reproduction of the local monodromy table for the family `F_i`.

use rigidcalc::convolution::build_f;
use rigidcalc::field::RootOfUnity;
use rigidcalc::monodromy::{
    certify_regular, is_absolutely_irreducible, local_jordan_types, rigidity_index,
};
use rigidcalc::{JordanType, RegularityCertificate, Result};
use serde_json::{json, Value};

pub const MAX_I: usize = 12;

/// Expected Jordan types at `0`, `1`, `inf`, transcribed row by row with
/// multiplicities as functions of `i`.
#[allow(clippy::manual_div_ceil)]
pub fn expected(i: usize) -> [JordanType; 3] {
    let one = RootOfUnity::one();
    let neg = RootOfUnity::minus_one();
    let at_inf = JordanType::unipotent(i + 1);
    match i % 4 {
        0 => [
            JordanType::from_blocks([(one, 1, i / 2), (neg, 1, i / 2 + 1)]),
            JordanType::from_blocks([(neg, 1, 1), (one, 2, i / 2)]),
            at_inf,
        ],
        1 => [
            JordanType::from_blocks([(one, 2, (i + 1) / 2)]),
            JordanType::from_blocks([(neg, 2, 1), (neg, 1, (i - 1) / 2), (one, 1, (i - 1) / 2)]),
            at_inf,
        ],
        2 => [
            JordanType::from_blocks([(one, 1, i / 2), (neg, 1, i / 2 + 1)]),
            JordanType::from_blocks([(one, 3, 1), (one, 2, (i - 2) / 2)]),
            at_inf,
        ],
        _ => [
            JordanType::from_blocks([(one, 2, (i + 1) / 2)]),
            JordanType::from_blocks([(one, 2, 1), (one, 1, (i - 3) / 2), (neg, 1, (i + 1) / 2)]),
            at_inf,
        ],
    }
}

#[derive(Clone, Debug)]
pub struct Table1Row {
    pub i: usize,
    pub rank: usize,
    pub at_0: JordanType,
    pub at_1: JordanType,
    pub at_inf: JordanType,
    pub rigidity_index: i64,
    pub irreducible: bool,
    pub regular_certificate: RegularityCertificate,
    pub matches_paper: bool,
}

#[derive(Clone, Debug)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
}

impl Table1Report {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches_paper)
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "i": r.i,
                    "rank": r.rank,
                    "jordan_at_0": r.at_0.to_string(),
                    "jordan_at_1": r.at_1.to_string(),
                    "jordan_at_inf": r.at_inf.to_string(),
                    "rigidity_index": r.rigidity_index,
                    "irreducible": r.irreducible,
                    "regular_certificate": r.regular_certificate.to_string(),
                    "matches_paper": r.matches_paper,
                })
            })
            .collect::<Vec<_>>();
        json!({"rows": rows, "all_match": self.all_match()})
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "i={:<2} rank={:<2} | 0: {} | 1: {} | inf: {} | index {} | irreducible {} | {} | {}\n",
                r.i,
                r.rank,
                r.at_0,
                r.at_1,
                r.at_inf,
                r.rigidity_index,
                r.irreducible,
                r.regular_certificate,
                if r.matches_paper { "match" } else { "MISMATCH" },
            ));
        }
        out
    }
}

/// Builds `F_0, ..., F_max_i` and compares each row with [`expected`].
pub fn run_table1(max_i: usize) -> Result<Table1Report> {
    let mut rows = Vec::with_capacity(max_i + 1);
    for i in 0..=max_i {
        let t = build_f(i as i64)?;
        let types = local_jordan_types(&t)?;
        let [at_0, at_1, at_inf] = [0, 1, 2].map(|k| types[k].1.clone());
        let exp = expected(i);
        let matches_paper =
            t.rank() == i + 1 && [&at_0, &at_1, &at_inf] == [&exp[0], &exp[1], &exp[2]];
        rows.push(Table1Row {
            i,
            rank: t.rank(),
            at_0,
            at_1,
            at_inf,
            rigidity_index: rigidity_index(&t),
            irreducible: is_absolutely_irreducible(&t),
            regular_certificate: certify_regular(&t)?,
            matches_paper,
        });
    }
    Ok(Table1Report { rows })
}
