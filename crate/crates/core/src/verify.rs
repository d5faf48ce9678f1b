//! End-to-end self-check over K = 2..max_k: enumeration against the
//! closed forms, pairwise-row redundancy, sum maximization, and the IC
//! vertex property sweep.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ops::{irredundant_rows, max_over};
use crate::rational::{RatVector, Rational};
use crate::region::{build_system, ChannelFamily, FamilyKind};
use crate::vertex::{
    check_vertex_properties, enumerate_extreme_points, ic_closed_form, mac_closed_form,
};

#[derive(Clone, Debug, Serialize)]
pub struct VerifyItem {
    pub check: &'static str,
    pub family: FamilyKind,
    #[serde(rename = "K")]
    pub k: usize,
    pub passed: bool,
    /// Mismatch details; `null` on success.
    pub diff: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub max_k: usize,
    pub passed: bool,
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerifyItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Extra point slipped into a closed-form list, to exercise the
    /// mismatch path.
    pub inject: Option<(FamilyKind, RatVector)>,
}

fn strings(v: &[RatVector]) -> Value {
    json!(v
        .iter()
        .map(|p| p.iter().map(Rational::to_string).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn verify_all(max_k: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    if max_k < 2 {
        return Err(Error::Domain(format!(
            "max K must be at least 2, got {max_k}"
        )));
    }
    let mut items = Vec::new();
    for k in 2..=max_k {
        for kind in [FamilyKind::Mac, FamilyKind::Ic] {
            let fam = ChannelFamily::new(kind, k)?;
            let sys = build_system(fam);
            let brute = enumerate_extreme_points(&sys);
            let closed = match kind {
                FamilyKind::Mac => mac_closed_form(k)?,
                FamilyKind::Ic => ic_closed_form(k)?,
            };
            let mut closed: Vec<RatVector> = closed.iter().map(|p| p.coords().to_vec()).collect();
            if let Some((ikind, pt)) = &opts.inject {
                if *ikind == kind && pt.len() == k {
                    closed.push(pt.clone());
                    closed.sort();
                    closed.dedup();
                }
            }
            let brute_c: Vec<RatVector> = brute.iter().map(|p| p.coords().to_vec()).collect();
            let missing: Vec<RatVector> = closed
                .iter()
                .filter(|p| !brute_c.contains(p))
                .cloned()
                .collect();
            let extra: Vec<RatVector> = brute_c
                .iter()
                .filter(|p| !closed.contains(p))
                .cloned()
                .collect();
            let ok = missing.is_empty() && extra.is_empty();
            items.push(VerifyItem {
                check: "vertices_match_closed_form",
                family: kind,
                k,
                passed: ok,
                diff: if ok {
                    Value::Null
                } else {
                    json!({"in_closed_form_only": strings(&missing), "in_enumeration_only": strings(&extra)})
                },
            });

            let ones = vec![Rational::one(); k];
            let (value, argmax) = max_over(&brute, &ones)?;
            let sym = vec![fam.symmetric_value(); k];
            let ok = value == fam.sum_sdof()
                && argmax.len() == 1
                && argmax[0].coords() == sym.as_slice();
            items.push(VerifyItem {
                check: "sum_maximum_unique",
                family: kind,
                k,
                passed: ok,
                diff: if ok {
                    Value::Null
                } else {
                    json!({
                        "expected": fam.sum_sdof().to_string(),
                        "found": value.to_string(),
                        "argmax": strings(&argmax.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()),
                    })
                },
            });

            if kind == FamilyKind::Ic {
                let irr = irredundant_rows(&sys)?;
                let pairs: Vec<usize> = (0..sys.len())
                    .filter(|&r| sys.tags()[r].is_interference())
                    .collect();
                let want_irredundant = k >= 4;
                let wrong: Vec<String> = pairs
                    .iter()
                    .filter(|r| irr.contains(r) != want_irredundant)
                    .map(|&r| sys.tags()[r].to_string())
                    .collect();
                items.push(VerifyItem {
                    check: "pairwise_rows_redundancy",
                    family: kind,
                    k,
                    passed: wrong.is_empty(),
                    diff: if wrong.is_empty() {
                        Value::Null
                    } else {
                        json!({"expected_irredundant": want_irredundant, "rows": wrong})
                    },
                });

                if k >= 3 {
                    let mut bad = Vec::new();
                    for v in &brute {
                        let rep = check_vertex_properties(v, &sys)?;
                        if !rep.all_passed() {
                            bad.push(json!({
                                "point": v.coords().iter().map(Rational::to_string).collect::<Vec<_>>(),
                                "failed": rep.failures().iter().map(|c| c.name).collect::<Vec<_>>(),
                            }));
                        }
                    }
                    items.push(VerifyItem {
                        check: "vertex_properties",
                        family: kind,
                        k,
                        passed: bad.is_empty(),
                        diff: if bad.is_empty() {
                            Value::Null
                        } else {
                            json!(bad)
                        },
                    });
                }
            }
        }
    }
    Ok(VerifyReport {
        max_k,
        passed: items.iter().all(|i| i.passed),
        items,
    })
}
