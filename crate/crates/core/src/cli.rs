//! Rendering for the `poly`, `enumerate` and `symfunc` subcommands.

use std::collections::BTreeMap;
use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use crate::binary_trees::{
    bicolored_comb_tally, bicolored_lyndon_tally, enumerate_bicolored_combs_with,
    enumerate_bicolored_lyndon_with, enumerate_normalized_with, fold_normalized, normalized_count,
    tally_normalized, Bicoloring, NormalizedTree,
};
use crate::enumerate::{Config, Tally};
use crate::error::{Error, Result};
use crate::poly::{drake_polynomial, gamma_closed_form, to_gamma_basis, GammaVector};
use crate::rooted_trees::{
    descent_tally, enumerate_rooted_trees_with, rooted_tree_count, RootedTree,
};
use crate::stirling::{
    enumerate_stirling_with, stirling_count, tally_stirling, StirlingPermutation,
};
use crate::symfunc::{comb_type_expansion_with, specialize_two_vars, Partition};

/// Above this many objects `enumerate` prints a histogram unless rows are
/// requested explicitly.
pub const HISTOGRAM_THRESHOLD: u64 = 100_000;

/// Largest `n` for which `poly --basis gamma` sums the closed form directly;
/// beyond it the coefficients come from peeling the product.
pub const CLOSED_FORM_DIRECT_MAX: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Standard,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Rooted,
    Normalized,
    Combs,
    Lyndon,
    Stirling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Histogram above the threshold, rows otherwise.
    Auto,
    Rows,
    Histogram,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Rooted => "rooted",
            Family::Normalized => "normalized",
            Family::Combs => "combs",
            Family::Lyndon => "lyndon",
            Family::Stirling => "stirling",
        }
    }

    pub fn stats(self) -> &'static [&'static str] {
        match self {
            Family::Rooted => &["des"],
            Family::Normalized => &["rdes", "nlyn", "free", "combtype"],
            Family::Combs => &["ones", "rdes"],
            Family::Lyndon => &["ones", "nlyn"],
            Family::Stirling => &["aapair", "tnpair"],
        }
    }

    /// Number of objects the family has on `[n]`.
    pub fn size(self, n: usize) -> u64 {
        match self {
            Family::Rooted | Family::Combs | Family::Lyndon => rooted_tree_count(n),
            Family::Normalized => normalized_count(n),
            Family::Stirling => stirling_count(n),
        }
    }
}

/// Validated statistic for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stat {
    family: Family,
    name: &'static str,
}

impl Stat {
    pub fn new(family: Family, stat: &str) -> Result<Self> {
        family
            .stats()
            .iter()
            .find(|&&s| s == stat)
            .map(|&name| Stat { family, name })
            .ok_or_else(|| Error::IncompatibleStat {
                family: family.name().into(),
                stat: stat.into(),
            })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }
}

pub fn cmd_poly(n: usize, basis: Basis, format: Format) -> Result<String> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be at least 1".into()));
    }
    let p = drake_polynomial(n);
    Ok(match basis {
        Basis::Standard => match format {
            Format::Text => p.to_string(),
            Format::Json => serde_json::to_string(&p).expect("plain data serializes"),
            Format::Csv => csv_table(
                &["power", "coeff"],
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| vec![i.to_string(), c.to_string()]),
            ),
        },
        Basis::Gamma => {
            let g = if n <= CLOSED_FORM_DIRECT_MAX {
                gamma_closed_form(n)
            } else {
                to_gamma_basis(&p)?
            };
            render_gamma(&g, format)
        }
    })
}

fn render_gamma(g: &GammaVector, format: Format) -> String {
    match format {
        Format::Text => format!("gamma: {g}"),
        Format::Json => serde_json::to_string(g).expect("plain data serializes"),
        Format::Csv => csv_table(
            &["j", "gamma"],
            g.gammas()
                .iter()
                .enumerate()
                .map(|(j, c)| vec![j.to_string(), c.to_string()]),
        ),
    }
}

/// `comb_type_expansion(n)`, its two-variable specialization and the γ-vector
/// of the latter.
pub fn cmd_symfunc(n: usize, format: Format, config: &Config) -> Result<String> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be at least 1".into()));
    }
    let expansion = comb_type_expansion_with(n, config)?;
    let special = specialize_two_vars(&expansion);
    let gamma = to_gamma_basis(&special)?;
    Ok(match format {
        Format::Text => {
            let mut lines: Vec<String> = expansion
                .terms()
                .iter()
                .map(|(lambda, c)| format!("e{lambda}: {c}"))
                .collect();
            lines.push(format!("specialization: {special}"));
            lines.push(format!("gamma: {gamma}"));
            lines.join("\n")
        }
        Format::Json => format!(
            r#"{{"n":{n},"expansion":{},"specialization":{},"gamma":{}}}"#,
            expansion.to_json(),
            serde_json::to_string(&special).expect("plain data serializes"),
            serde_json::to_string(&gamma).expect("plain data serializes"),
        ),
        Format::Csv => csv_table(
            &["lambda", "coeff"],
            expansion
                .terms()
                .iter()
                .map(|(lambda, c)| vec![parts_text(lambda), c.to_string()]),
        ),
    })
}

fn parts_text(lambda: &Partition) -> String {
    let parts: Vec<String> = lambda.parts().iter().map(u32::to_string).collect();
    parts.join(" ")
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory write");
    String::from_utf8(bytes)
        .expect("csv of utf-8 fields")
        .trim_end()
        .to_string()
}

/// Value of a statistic, either a count or a comb type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum StatValue {
    Int(usize),
    Partition(Partition),
}

impl StatValue {
    fn text(&self) -> String {
        match self {
            StatValue::Int(v) => v.to_string(),
            StatValue::Partition(p) => p.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            StatValue::Int(v) => serde_json::Value::from(*v),
            StatValue::Partition(p) => serde_json::Value::from(p.parts().to_vec()),
        }
    }
}

pub type Histogram = BTreeMap<StatValue, u64>;

fn from_tally(tally: &Tally) -> Histogram {
    tally
        .counts()
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(v, &c)| (StatValue::Int(v), c))
        .collect()
}

/// Tallies a family on `[n]` by one statistic.
pub fn histogram(family: Family, n: usize, stat: Stat, config: &Config) -> Result<Histogram> {
    let tally = match (family, stat.name) {
        (Family::Rooted, _) => descent_tally(n, config)?,
        (Family::Normalized, "combtype") => {
            return fold_normalized(
                n,
                config,
                Histogram::new,
                |tree, h| *h.entry(StatValue::Partition(tree.comb_type())).or_default() += 1,
                |mut a, b| {
                    for (k, c) in b {
                        *a.entry(k).or_default() += c;
                    }
                    a
                },
            )
        }
        (Family::Normalized, name) => tally_normalized(n, config, |tree, t| {
            t.add(normalized_stat(tree, name));
        })?,
        (Family::Combs, "ones") => bicolored_comb_tally(n, config)?,
        (Family::Combs, _) => tally_normalized(n, config, |tree, t| {
            if let Some(fiber) = tree.comb_fiber() {
                t.add_many(tree.rdes(), fiber.size());
            }
        })?,
        (Family::Lyndon, "ones") => bicolored_lyndon_tally(n, config)?,
        (Family::Lyndon, _) => tally_normalized(n, config, |tree, t| {
            if let Some(fiber) = tree.lyndon_fiber() {
                t.add_many(tree.nlyn(), fiber.size());
            }
        })?,
        (Family::Stirling, name) => {
            tally_stirling(n, config, |w, t| t.add(stirling_stat(w, name)))?
        }
    };
    Ok(from_tally(&tally))
}

fn normalized_stat(tree: &NormalizedTree, name: &str) -> usize {
    match name {
        "rdes" => tree.rdes(),
        "nlyn" => tree.nlyn(),
        _ => tree.free_count(),
    }
}

fn stirling_stat(w: &StirlingPermutation, name: &str) -> usize {
    match name {
        "aapair" => w.aapair(),
        _ => w.tnpair(),
    }
}

pub fn render_histogram(h: &Histogram, format: Format) -> String {
    match format {
        Format::Text => h
            .iter()
            .map(|(v, c)| format!("{}: {c}", v.text()))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => {
            let rows: Vec<serde_json::Value> = h
                .iter()
                .map(|(v, c)| {
                    let mut m = serde_json::Map::new();
                    m.insert("value".into(), v.json());
                    m.insert("count".into(), c.to_string().into());
                    m.into()
                })
                .collect();
            serde_json::to_string(&rows).expect("plain data serializes")
        }
        Format::Csv => csv_table(
            &["value", "count"],
            h.iter().map(|(v, c)| vec![v.text(), c.to_string()]),
        ),
    }
}

/// Edges as `parent-child`, e.g. `2:2-1 2-3` for root 2.
fn rooted_text(tree: &RootedTree) -> String {
    let edges: Vec<String> = tree
        .edges()
        .iter()
        .map(|(p, c)| format!("{p}-{c}"))
        .collect();
    format!("{}:{}", tree.root(), edges.join(" "))
}

fn colors_text(c: &Bicoloring) -> String {
    let colors: Vec<String> = c.colors.iter().map(u8::to_string).collect();
    colors.join(" ")
}

#[derive(Serialize)]
struct StirlingRow {
    word: String,
    aapair: usize,
    tnpair: usize,
    is_naas: bool,
    is_ntns: bool,
}

impl StirlingRow {
    fn of(w: &StirlingPermutation) -> Self {
        StirlingRow {
            word: w.to_string(),
            aapair: w.aapair(),
            tnpair: w.tnpair(),
            is_naas: w.is_naas(),
            is_ntns: w.is_ntns(),
        }
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.word.clone(),
            self.aapair.to_string(),
            self.tnpair.to_string(),
            self.is_naas.to_string(),
            self.is_ntns.to_string(),
        ]
    }
}

const STIRLING_HEADER: [&str; 5] = ["word", "aapair", "tnpair", "is_naas", "is_ntns"];

/// Streams one row per object, in enumeration order.
fn write_rows<W: Write>(
    out: &mut W,
    family: Family,
    n: usize,
    stat: Stat,
    format: Format,
    config: &Config,
) -> Result<()> {
    let rows: Box<dyn Iterator<Item = Row>> = match family {
        Family::Rooted => Box::new(
            enumerate_rooted_trees_with(n, config)?.map(|t| Row::Object {
                json: serde_json::to_value(t.to_json()).expect("plain data serializes"),
                text: rooted_text(&t),
                value: t.des(),
            }),
        ),
        Family::Normalized => Box::new(enumerate_normalized_with(n, config)?.map(move |t| {
            let value = match stat.name {
                "combtype" => StatValue::Partition(t.comb_type()),
                name => StatValue::Int(normalized_stat(&t, name)),
            };
            Row::Tree {
                tree: t.to_string(),
                colors: None,
                value,
            }
        })),
        Family::Combs => Box::new(
            enumerate_bicolored_combs_with(n, config)?.map(move |(t, c)| Row::Tree {
                tree: t.to_string(),
                value: StatValue::Int(if stat.name == "ones" {
                    c.ones()
                } else {
                    t.rdes()
                }),
                colors: Some(colors_text(&c)),
            }),
        ),
        Family::Lyndon => Box::new(enumerate_bicolored_lyndon_with(n, config)?.map(
            move |(t, c)| Row::Tree {
                tree: t.to_string(),
                value: StatValue::Int(if stat.name == "ones" {
                    c.ones()
                } else {
                    t.nlyn()
                }),
                colors: Some(colors_text(&c)),
            },
        )),
        Family::Stirling => Box::new(
            enumerate_stirling_with(n, config)?.map(|w| Row::Stirling(StirlingRow::of(&w))),
        ),
    };
    let io = |e: std::io::Error| Error::Io(e.to_string());
    let colored = matches!(family, Family::Combs | Family::Lyndon);
    let header: Vec<&str> = match family {
        Family::Stirling => STIRLING_HEADER.to_vec(),
        Family::Rooted => vec!["tree", "des"],
        _ if colored => vec!["tree", "colors", stat.name],
        _ => vec!["tree", stat.name],
    };
    match format {
        Format::Csv | Format::Text => {
            let delimiter = if format == Format::Csv { b',' } else { b'\t' };
            let mut w = csv::WriterBuilder::new()
                .delimiter(delimiter)
                .quote_style(if format == Format::Csv {
                    csv::QuoteStyle::Necessary
                } else {
                    csv::QuoteStyle::Never
                })
                .from_writer(out);
            w.write_record(&header)
                .map_err(|e| Error::Io(e.to_string()))?;
            for row in rows {
                w.write_record(row.fields())
                    .map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        Format::Json => {
            out.write_all(b"[").map_err(io)?;
            for (i, row) in rows.enumerate() {
                if i > 0 {
                    out.write_all(b",").map_err(io)?;
                }
                let written = match &row {
                    Row::Stirling(r) => serde_json::to_writer(&mut *out, r),
                    _ => serde_json::to_writer(&mut *out, &row.json(stat.name)),
                };
                written.map_err(|e| Error::Io(e.to_string()))?;
            }
            out.write_all(b"]\n").map_err(io)?;
        }
    }
    Ok(())
}

enum Row {
    Object {
        json: serde_json::Value,
        text: String,
        value: usize,
    },
    Tree {
        tree: String,
        colors: Option<String>,
        value: StatValue,
    },
    Stirling(StirlingRow),
}

impl Row {
    fn fields(&self) -> Vec<String> {
        match self {
            Row::Object { text, value, .. } => vec![text.clone(), value.to_string()],
            Row::Tree {
                tree,
                colors,
                value,
            } => {
                let mut f = vec![tree.clone()];
                f.extend(colors.clone());
                f.push(value.text());
                f
            }
            Row::Stirling(row) => row.fields(),
        }
    }

    fn json(&self, stat: &str) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        match self {
            Row::Object { json, value, .. } => {
                m.insert("tree".into(), json.clone());
                m.insert(stat.into(), (*value).into());
            }
            Row::Tree {
                tree,
                colors,
                value,
            } => {
                m.insert("tree".into(), tree.clone().into());
                if let Some(colors) = colors {
                    m.insert("colors".into(), colors.clone().into());
                }
                m.insert(stat.into(), value.json());
            }
            Row::Stirling(row) => return serde_json::to_value(row).expect("plain data serializes"),
        }
        m.into()
    }
}

/// Rows or a histogram of `stat` over a family on `[n]`.
pub fn cmd_enumerate<W: Write>(
    out: &mut W,
    family: Family,
    n: usize,
    stat: &str,
    format: Format,
    mode: Mode,
    config: &Config,
) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be at least 1".into()));
    }
    let stat = Stat::new(family, stat)?;
    let as_histogram = match mode {
        Mode::Histogram => true,
        Mode::Rows => false,
        Mode::Auto => family.size(n) > HISTOGRAM_THRESHOLD,
    };
    if as_histogram {
        let h = histogram(family, n, stat, config)?;
        writeln!(out, "{}", render_histogram(&h, format)).map_err(|e| Error::Io(e.to_string()))
    } else {
        write_rows(out, family, n, stat, format, config)
    }
}

/// `Q_n` as CSV rows of `word,aapair,tnpair,is_naas,is_ntns`.
pub fn stirling_table_csv(n: usize, config: &Config) -> Result<String> {
    let mut out = Vec::new();
    cmd_enumerate(
        &mut out,
        Family::Stirling,
        n,
        "tnpair",
        Format::Csv,
        Mode::Rows,
        config,
    )?;
    Ok(String::from_utf8(out).expect("utf-8 rows"))
}
