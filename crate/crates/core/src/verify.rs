//! Verification suites: every identity the library claims, re-checked up to a
//! size bound, with one record per (check, parameters).

use std::fmt::Display;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::binary_trees::{
    bicolored_comb_polynomial, bicolored_lyndon_polynomial, distribution_ndnl_nlyn_with,
    distribution_ndrd_rdes_with, tally_normalized,
};
use crate::cli::stirling_table_csv;
use crate::enumerate::{double_factorial, Config, Tally};
use crate::error::{Error, Result};
use crate::poly::{
    drake_polynomial, eulerian_gamma_count_with, eulerian_polynomial_with, gamma_closed_form,
    to_gamma_basis,
};
use crate::rooted_trees::descent_polynomial_with;
use crate::stirling::{
    distribution_naas_aapair_with, distribution_ntns_tnpair_with, tally_stirling,
};
use crate::symfunc::{comb_type_expansion_with, f_mcomb_direct_with, specialize_two_vars};

/// The closed form sums over `2^((n-1)/2)` subsets; past this the check is
/// skipped.
pub const CLOSED_FORM_CAP: usize = 24;

/// Largest number of colors tried by the `symfunc` suite.
pub const SYMFUNC_MAX_COLORS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Drake,
    Gamma,
    Combs,
    Lyndon,
    Stirling,
    Symfunc,
    Eulerian,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Drake,
        Suite::Gamma,
        Suite::Combs,
        Suite::Lyndon,
        Suite::Stirling,
        Suite::Symfunc,
        Suite::Eulerian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Drake => "drake",
            Suite::Gamma => "gamma",
            Suite::Combs => "combs",
            Suite::Lyndon => "lyndon",
            Suite::Stirling => "stirling",
            Suite::Symfunc => "symfunc",
            Suite::Eulerian => "eulerian",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub check: &'static str,
    pub params: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n_max: usize,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// True when no check failed.
    pub fn is_success(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "suite {} n_max={}: {} passed, {} failed, {} skipped",
            self.suite.name(),
            self.n_max,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }

    /// One line per check plus a summary. Timings are left out unless asked
    /// for so that repeated runs print identical bytes.
    pub fn render_text(&self, timings: bool) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mut line = format!("{} {}/{} {}", c.status.label(), c.suite, c.check, c.params);
            match c.status {
                Status::Pass => line += &format!(": {}", c.actual),
                Status::Fail => line += &format!(": expected {} got {}", c.expected, c.actual),
                Status::Skipped => line += &format!(": {}", c.actual),
            }
            if timings {
                line += &format!(" ({} ms)", c.elapsed_ms);
            }
            out += &line;
            out.push('\n');
        }
        out += &self.summary();
        out
    }

    pub fn render_json(&self, timings: bool) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            suite: &'a str,
            check: &'a str,
            params: &'a str,
            status: Status,
            expected: &'a str,
            actual: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            elapsed_ms: Option<u128>,
        }
        #[derive(Serialize)]
        struct Report<'a> {
            suite: &'a str,
            n_max: usize,
            passed: usize,
            failed: usize,
            skipped: usize,
            checks: Vec<Row<'a>>,
        }
        let report = Report {
            suite: self.suite.name(),
            n_max: self.n_max,
            passed: self.count(Status::Pass),
            failed: self.count(Status::Fail),
            skipped: self.count(Status::Skipped),
            checks: self
                .checks
                .iter()
                .map(|c| Row {
                    suite: c.suite,
                    check: c.check,
                    params: &c.params,
                    status: c.status,
                    expected: &c.expected,
                    actual: &c.actual,
                    elapsed_ms: timings.then_some(c.elapsed_ms),
                })
                .collect(),
        };
        serde_json::to_string(&report).expect("plain data serializes")
    }

    pub fn render_csv(&self, timings: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["suite", "check", "params", "status", "expected", "actual"];
        if timings {
            header.push("elapsed_ms");
        }
        w.write_record(&header).expect("in-memory write");
        for c in &self.checks {
            let status = serde_json::to_value(c.status).expect("plain data serializes");
            let mut row = vec![
                c.suite.to_string(),
                c.check.to_string(),
                c.params.clone(),
                status.as_str().unwrap_or_default().to_string(),
                c.expected.clone(),
                c.actual.clone(),
            ];
            if timings {
                row.push(c.elapsed_ms.to_string());
            }
            w.write_record(&row).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory write");
        String::from_utf8(bytes)
            .expect("utf-8 fields")
            .trim_end()
            .to_string()
    }
}

struct Runner<'a> {
    config: &'a Config,
    suite: &'static str,
    checks: Vec<CheckRecord>,
}

impl Runner<'_> {
    /// Records a check whose status is decided by comparing the rendered
    /// expected and actual values. A cap refusal is a skip; any other error
    /// is a failure.
    fn check<E: Display, A: Display>(
        &mut self,
        check: &'static str,
        params: String,
        run: impl FnOnce() -> Result<(E, A)>,
    ) {
        let start = Instant::now();
        let outcome = run();
        let elapsed_ms = start.elapsed().as_millis();
        let (status, expected, actual) = match outcome {
            Ok((e, a)) => {
                let (e, a) = (e.to_string(), a.to_string());
                let status = if e == a { Status::Pass } else { Status::Fail };
                (status, e, a)
            }
            Err(err @ Error::LimitExceeded { .. }) => {
                (Status::Skipped, String::new(), err.to_string())
            }
            Err(err) => (Status::Fail, String::new(), err.to_string()),
        };
        self.checks.push(CheckRecord {
            suite: self.suite,
            check,
            params,
            status,
            expected,
            actual,
            elapsed_ms,
        });
    }
}

fn closed_form(n: usize, config: &Config) -> Result<crate::poly::GammaVector> {
    config.check_cap("gamma closed form", n, CLOSED_FORM_CAP)?;
    Ok(gamma_closed_form(n))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn tally_text(t: &Tally) -> String {
    let counts: Vec<String> = t.counts().iter().map(u64::to_string).collect();
    counts.join(" ")
}

fn drake(r: &mut Runner, n_max: usize) {
    for n in 1..=n_max {
        let p = format!("n={n}");
        r.check("descent-polynomial", p.clone(), || {
            Ok((drake_polynomial(n), descent_polynomial_with(n, r.config)?))
        });
        r.check("cayley", p.clone(), || {
            let t = drake_polynomial(n);
            Ok((
                BigInt::from(n).pow(n as u32 - 1),
                t.evaluate(&BigInt::from(1)),
            ))
        });
        r.check("palindromic", p.clone(), || {
            Ok((true, drake_polynomial(n).is_palindromic()))
        });
        // every -(n-i)/i is a root
        r.check("roots", p, || {
            let t = drake_polynomial(n);
            let values: Vec<String> = (1..n)
                .map(|i| {
                    t.evaluate_homogeneous(&-BigInt::from(n - i), &BigInt::from(i))
                        .to_string()
                })
                .collect();
            Ok((vec!["0"; n - 1].join(" "), values.join(" ")))
        });
    }
}

fn gamma(r: &mut Runner, n_max: usize) {
    for n in 1..=n_max {
        let p = format!("n={n}");
        let config = r.config;
        r.check("closed-form", p.clone(), || {
            Ok((
                closed_form(n, config)?,
                to_gamma_basis(&drake_polynomial(n))?,
            ))
        });
        r.check("nonnegative", p.clone(), || {
            Ok((true, to_gamma_basis(&drake_polynomial(n))?.is_nonnegative()))
        });
        r.check("ndrd-rdes", p.clone(), || {
            Ok((
                to_gamma_basis(&drake_polynomial(n))?,
                distribution_ndrd_rdes_with(n, config)?,
            ))
        });
        r.check("ndnl-nlyn", p.clone(), || {
            Ok((
                to_gamma_basis(&drake_polynomial(n))?,
                distribution_ndnl_nlyn_with(n, config)?,
            ))
        });
        if n >= 2 {
            r.check("ntns-tnpair", p.clone(), || {
                Ok((
                    to_gamma_basis(&drake_polynomial(n))?,
                    distribution_ntns_tnpair_with(n - 1, config)?,
                ))
            });
            r.check("naas-aapair", p, || {
                Ok((
                    to_gamma_basis(&drake_polynomial(n))?,
                    distribution_naas_aapair_with(n - 1, config)?,
                ))
            });
        }
    }
}

fn combs(r: &mut Runner, n_max: usize) {
    for n in 1..=n_max {
        let p = format!("n={n}");
        let config = r.config;
        r.check("bicolored-combs", p.clone(), || {
            Ok((drake_polynomial(n), bicolored_comb_polynomial(n, config)?))
        });
        r.check("free-identity", p.clone(), || {
            let bad = tally_normalized(n, config, |tree, t| {
                if tree.is_ndrd() && tree.free_count() + 2 * tree.rdes() != n - 1 {
                    t.add(0)
                }
            })?;
            Ok((0, bad.total()))
        });
        r.check("fiber-size", p.clone(), || {
            // a fiber exists exactly over NDRD trees and has 2^free colorings
            let bad = tally_normalized(n, config, |tree, t| {
                let size = tree.comb_fiber().map(|f| f.size());
                let expected = tree.is_ndrd().then(|| 1u64 << tree.free_count());
                if size != expected {
                    t.add(0)
                }
            })?;
            Ok((0, bad.total()))
        });
        r.check("normalized-count", p, || {
            let total = tally_normalized(n, config, |_, t| t.add(0))?.total();
            Ok((double_factorial((2 * n as u64).saturating_sub(3)), total))
        });
    }
}

fn lyndon(r: &mut Runner, n_max: usize) {
    for n in 1..=n_max {
        let p = format!("n={n}");
        let config = r.config;
        r.check("bicolored-lyndon", p.clone(), || {
            Ok((drake_polynomial(n), bicolored_lyndon_polynomial(n, config)?))
        });
        r.check("ndnl-nlyn", p.clone(), || {
            Ok((
                closed_form(n, config)?,
                distribution_ndnl_nlyn_with(n, config)?,
            ))
        });
        r.check("lyndon-trees", p, || {
            let count = tally_normalized(n, config, |tree, t| {
                if tree.is_lyndon_tree() {
                    t.add(0)
                }
            })?;
            Ok((factorial(n - 1), count.total()))
        });
    }
}

/// Stirling-side checks are indexed by the tree size `n`, comparing against
/// `Q_{n-1}`.
fn stirling(r: &mut Runner, n_max: usize) {
    let config = r.config;
    for n in 1..=n_max {
        let p = format!("n={n}");
        r.check("stirling-count", p.clone(), || {
            let count = tally_stirling(n, config, |w, t| {
                if crate::stirling::is_stirling(w.word()).unwrap_or(false) {
                    t.add(0)
                }
            })?;
            Ok((double_factorial(2 * n as u64 - 1), count.total()))
        });
        if n < 2 {
            continue;
        }
        let q = format!("n={n} stirling_n={}", n - 1);
        r.check("ntns-tnpair", q.clone(), || {
            Ok((
                closed_form(n, config)?,
                distribution_ntns_tnpair_with(n - 1, config)?,
            ))
        });
        r.check("naas-aapair", q.clone(), || {
            Ok((
                closed_form(n, config)?,
                distribution_naas_aapair_with(n - 1, config)?,
            ))
        });
        r.check("rdes-tnpair", q.clone(), || {
            let trees = tally_normalized(n, config, |tree, t| t.add(tree.rdes()))?;
            let words = tally_stirling(n - 1, config, |w, t| t.add(w.tnpair()))?;
            Ok((tally_text(&trees), tally_text(&words)))
        });
        r.check("nlyn-aapair", q.clone(), || {
            let trees = tally_normalized(n, config, |tree, t| t.add(tree.nlyn()))?;
            let words = tally_stirling(n - 1, config, |w, t| t.add(w.aapair()))?;
            Ok((tally_text(&trees), tally_text(&words)))
        });
        r.check("ndrd-naas", q.clone(), || {
            let trees = tally_normalized(n, config, |tree, t| {
                if tree.is_ndrd() {
                    t.add(0)
                }
            })?;
            let words = tally_stirling(n - 1, config, |w, t| {
                if w.is_naas() {
                    t.add(0)
                }
            })?;
            Ok((trees.total(), words.total()))
        });
        r.check("ndnl-ntns", q, || {
            let trees = tally_normalized(n, config, |tree, t| {
                if tree.is_ndnl() {
                    t.add(0)
                }
            })?;
            let words = tally_stirling(n - 1, config, |w, t| {
                if w.is_ntns() {
                    t.add(0)
                }
            })?;
            Ok((trees.total(), words.total()))
        });
    }
    if n_max >= 2 {
        r.check("q2-table", "stirling_n=2".into(), || {
            let expected = "word,aapair,tnpair,is_naas,is_ntns\n\
                            1122,1,0,true,true\n\
                            1221,0,1,true,true\n\
                            2211,0,0,true,true\n";
            Ok((
                expected.escape_debug().to_string(),
                stirling_table_csv(2, config)?.escape_debug().to_string(),
            ))
        });
    }
}

fn symfunc(r: &mut Runner, n_max: usize) {
    let config = r.config;
    for n in 1..=n_max {
        let p = format!("n={n}");
        let expansion = comb_type_expansion_with(n, config);
        for k in 1..=SYMFUNC_MAX_COLORS {
            r.check("colored-combs", format!("n={n} k={k}"), || {
                let expansion = expansion.clone()?;
                Ok((
                    expansion.to_variables(k).to_json(),
                    f_mcomb_direct_with(n, k, config)?.to_json(),
                ))
            });
        }
        r.check("specialization", p.clone(), || {
            Ok((
                drake_polynomial(n),
                specialize_two_vars(&expansion.clone()?),
            ))
        });
        r.check("gamma-extraction", p, || {
            let special = specialize_two_vars(&expansion.clone()?);
            Ok((closed_form(n, config)?, to_gamma_basis(&special)?))
        });
    }
}

fn eulerian(r: &mut Runner, n_max: usize) {
    let cap_override = r.config.cap_override;
    if n_max >= 3 {
        r.check("polynomial", "n=3".into(), || {
            Ok(("1 4 1", eulerian_polynomial_with(3, cap_override)?))
        });
    }
    for n in 1..=n_max {
        r.check("gamma-count", format!("n={n}"), || {
            Ok((
                to_gamma_basis(&eulerian_polynomial_with(n, cap_override)?)?,
                eulerian_gamma_count_with(n, cap_override)?,
            ))
        });
    }
}

/// Runs `suite` (or every suite) for sizes `1..=n_max`. Checks past a cap are
/// reported as skipped unless the configuration overrides caps.
pub fn cmd_verify(suite: Suite, n_max: usize, config: &Config) -> Result<SuiteReport> {
    if n_max == 0 {
        return Err(Error::InvalidSize("n_max must be at least 1".into()));
    }
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        one => vec![one],
    };
    let mut checks = Vec::new();
    for s in suites {
        let mut r = Runner {
            config,
            suite: s.name(),
            checks: Vec::new(),
        };
        match s {
            Suite::Drake => drake(&mut r, n_max),
            Suite::Gamma => gamma(&mut r, n_max),
            Suite::Combs => combs(&mut r, n_max),
            Suite::Lyndon => lyndon(&mut r, n_max),
            Suite::Stirling => stirling(&mut r, n_max),
            Suite::Symfunc => symfunc(&mut r, n_max),
            Suite::Eulerian => eulerian(&mut r, n_max),
            Suite::All => unreachable!(),
        }
        checks.extend(r.checks);
    }
    Ok(SuiteReport {
        suite,
        n_max,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in std::iter::once(Suite::All).chain(Suite::EACH) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!(
            "nope".parse::<Suite>(),
            Err(Error::InvalidSuite(_))
        ));
    }

    #[test]
    fn trivial_sizes_pass() {
        let report = cmd_verify(Suite::All, 1, &Config::default()).unwrap();
        assert!(report.is_success(), "{}", report.render_text(false));
        assert_eq!(report.count(Status::Skipped), 0);
        assert!(cmd_verify(Suite::All, 0, &Config::default()).is_err());
    }

    #[test]
    fn gamma_of_t3_from_every_source() {
        let report = cmd_verify(Suite::Gamma, 3, &Config::default()).unwrap();
        assert!(report.is_success());
        let at3: Vec<&CheckRecord> = report
            .checks
            .iter()
            .filter(|c| c.params == "n=3" && c.check != "nonnegative")
            .collect();
        assert_eq!(at3.len(), 5);
        assert!(at3.iter().all(|c| c.actual == "2 1"));
    }

    #[test]
    fn drake_suite_small_sizes() {
        let report = cmd_verify(Suite::Drake, 7, &Config::default()).unwrap();
        assert!(report.is_success(), "{}", report.render_text(false));
        assert_eq!(report.checks.len(), 7 * 4);
    }

    #[test]
    fn every_suite_passes_on_small_sizes() {
        for s in Suite::EACH {
            let report = cmd_verify(s, 5, &Config::default()).unwrap();
            assert!(report.is_success(), "{}", report.render_text(false));
            assert_eq!(report.count(Status::Skipped), 0, "{}", s.name());
        }
    }

    #[test]
    fn caps_become_skips() {
        let report = cmd_verify(Suite::Eulerian, 11, &Config::default()).unwrap();
        assert!(report.is_success());
        let skipped: Vec<&CheckRecord> = report
            .checks
            .iter()
            .filter(|c| c.status == Status::Skipped)
            .collect();
        assert_eq!(skipped.len(), 1);
        assert_eq!(skipped[0].params, "n=11");
    }

    #[test]
    fn failures_are_reported() {
        let mut r = Runner {
            config: &Config::default(),
            suite: "test",
            checks: Vec::new(),
        };
        r.check("mismatch", String::new(), || Ok((1, 2)));
        r.check("error", String::new(), || {
            Err::<(u8, u8), _>(Error::Parse("x".into()))
        });
        let report = SuiteReport {
            suite: Suite::All,
            n_max: 1,
            checks: r.checks,
        };
        assert_eq!(report.count(Status::Fail), 2);
        assert!(!report.is_success());
        assert!(report
            .render_text(false)
            .contains("FAIL test/mismatch : expected 1 got 2"));
    }

    #[test]
    fn renderings_are_deterministic_without_timings() {
        let a = cmd_verify(Suite::Gamma, 4, &Config::default()).unwrap();
        let b = cmd_verify(Suite::Gamma, 4, &Config::with_threads(2)).unwrap();
        assert_eq!(a.render_text(false), b.render_text(false));
        assert_eq!(a.render_json(false), b.render_json(false));
        assert_eq!(a.render_csv(false), b.render_csv(false));
        assert!(!a.render_json(false).contains("elapsed_ms"));
        assert!(a.render_json(true).contains("elapsed_ms"));
        assert!(a
            .render_csv(false)
            .starts_with("suite,check,params,status,expected,actual\n"));
    }
}
