//! Reference data for `K = Q(sqrt(-5))`, `N = 12`, `T = (Z/12Z)^*` and the
//! end-to-end check against it.

use std::collections::BTreeSet;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{
    canonical_row, enumerate_mq_classes, equivalent_mod_gamma, gamma_q_table, representatives,
    RowVec, SubgroupT,
};
use crate::field::ImagQuadField;
use crate::forms::QuadForm;
use crate::modular::{class_polynomial_for_group, Invariant};
use crate::serde_int;

const EXAMPLE_JSON: &str = include_str!("../data/example_k20_n12.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowClassList {
    pub form: String,
    pub rows: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    #[serde(rename = "d_K", with = "serde_int")]
    pub d_k: Integer,
    #[serde(rename = "N", with = "serde_int")]
    pub n: Integer,
    #[serde(rename = "T")]
    pub t: String,
    pub forms: Vec<String>,
    pub row_classes: Vec<RowClassList>,
    #[serde(with = "serde_int::vec")]
    pub class_polynomial: Vec<Integer>,
}

impl Golden {
    pub fn example() -> Golden {
        serde_json::from_str(EXAMPLE_JSON).expect("embedded reference data parses")
    }

    pub fn parsed_forms(&self) -> Result<Vec<QuadForm>> {
        self.forms.iter().map(|s| s.parse()).collect()
    }
}

/// Parses a row written as two decimal strings.
fn parse_row(r: &[String; 2]) -> Result<RowVec> {
    let p = |s: &String| {
        s.trim()
            .parse::<Integer>()
            .map_err(|e| Error::Parse(format!("row entry {s:?}: {e}")))
    };
    Ok(RowVec::new(p(&r[0])?, p(&r[1])?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        out.push_str(if self.passed {
            "verify-example: PASS\n"
        } else {
            "verify-example: FAIL\n"
        });
        out
    }
}

/// Runs the full pipeline for `(d_K, N)` of `golden` with subgroup `t` and
/// compares representatives, row classes and coefficients.
pub fn verify(golden: &Golden, t: &SubgroupT, inv: &Invariant, prec: u32) -> Result<Report> {
    let field = ImagQuadField::new(golden.d_k.clone())?;
    if *t.modulus() != golden.n {
        return Err(Error::InvalidSubgroup(format!(
            "T is taken mod {}, reference data is mod {}",
            t.modulus(),
            golden.n
        )));
    }
    let mut checks = Vec::new();

    let group = representatives(&field, t)?;
    let expected = golden.parsed_forms()?;
    checks.push(match_representatives(&field, t, &group.reps, &expected)?);

    for list in &golden.row_classes {
        checks.push(match_row_classes(&field, t, list)?);
    }

    let (poly, _) = class_polynomial_for_group(&group, inv, prec)?;
    let diffs: Vec<String> = (0..poly.coefficients.len().max(golden.class_polynomial.len()))
        .filter_map(|i| {
            let got = poly.coefficients.get(i);
            let want = golden.class_polynomial.get(i);
            (got != want).then(|| {
                format!(
                    "coefficient {i}: got {}, expected {}",
                    got.map_or("-".into(), |x| x.to_string()),
                    want.map_or("-".into(), |x| x.to_string())
                )
            })
        })
        .collect();
    checks.push(Check {
        name: "class polynomial".into(),
        passed: diffs.is_empty(),
        detail: if diffs.is_empty() {
            format!(
                "{} coefficients equal at {} bits, max residual {:.3e}",
                poly.coefficients.len(),
                poly.precision_bits,
                poly.max_residual()
            )
        } else {
            diffs.join("; ")
        },
    });

    Ok(Report {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn match_representatives(
    field: &ImagQuadField,
    t: &SubgroupT,
    got: &[QuadForm],
    expected: &[QuadForm],
) -> Result<Check> {
    let name = "representatives".to_string();
    if got.len() != expected.len() {
        return Ok(Check {
            name,
            passed: false,
            detail: format!("{} classes, expected {}", got.len(), expected.len()),
        });
    }
    let mut used = BTreeSet::new();
    for q in got {
        let mut hits = Vec::new();
        for (k, e) in expected.iter().enumerate() {
            if equivalent_mod_gamma(q, e, field, t)? {
                hits.push(k);
            }
        }
        if hits.len() != 1 || !used.insert(hits[0]) {
            return Ok(Check {
                name,
                passed: false,
                detail: format!("{q} matches reference forms {hits:?}"),
            });
        }
    }
    Ok(Check {
        name,
        passed: true,
        detail: format!("{} forms matched one-to-one", got.len()),
    })
}

fn match_row_classes(field: &ImagQuadField, t: &SubgroupT, list: &RowClassList) -> Result<Check> {
    let q: QuadForm = list.form.parse()?;
    let name = format!("row classes of {q}");
    let table = gamma_q_table(&q, field, t.modulus())?;
    let want: BTreeSet<RowVec> = list
        .rows
        .iter()
        .map(|r| parse_row(r).map(|r| canonical_row(&r.reduced(t.modulus()), &table, t)))
        .collect::<Result<_>>()?;
    let got: BTreeSet<RowVec> = enumerate_mq_classes(&q, field, t)?
        .into_iter()
        .map(|r| canonical_row(&r, &table, t))
        .collect();
    let passed = want == got && want.len() == list.rows.len();
    let detail = if passed {
        format!("{} classes", got.len())
    } else {
        let fmt = |s: &BTreeSet<RowVec>| {
            s.iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("got {}, expected {}", fmt(&got), fmt(&want))
    };
    Ok(Check {
        name,
        passed,
        detail,
    })
}
