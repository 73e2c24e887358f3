//! The worked example with four blocks of size 2, read from the LaTeX
//! fragments under `fixtures/appendix`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use qkz_core::algebra::{parse_poly, parse_rf, Operator, Polynomial, VarSet};
use qkz_core::combinatorics::{phi, Basis, SignedPermutation, Tableau};
use qkz_core::qkz::PsiVector;
use qkz_core::rmatrix::FixtureFamily;

use crate::latex::{array_cells, call_args, environments, split_top, strip_layout, tableaux};

pub const K: usize = 4;
pub const LAMBDA: [usize; 4] = [2, 2, 2, 2];
pub const M: [usize; 4] = [2, 2, 2, 2];
pub const ELL: [usize; 4] = [4, 4, 0, 0];

/// File name and contents of every fixture.
pub const SOURCES: [(&str, &str); 8] = [
    ("relations.tex", include_str!("../fixtures/appendix/relations.tex")),
    ("components.tex", include_str!("../fixtures/appendix/components.tex")),
    ("multidegrees.tex", include_str!("../fixtures/appendix/multidegrees.tex")),
    ("rmatrices.tex", include_str!("../fixtures/appendix/rmatrices.tex")),
    ("cyclicity.tex", include_str!("../fixtures/appendix/cyclicity.tex")),
    ("wheel.tex", include_str!("../fixtures/appendix/wheel.tex")),
    ("deformed_relations.tex", include_str!("../fixtures/appendix/deformed_relations.tex")),
    ("deformed_component.tex", include_str!("../fixtures/appendix/deformed_component.tex")),
];

#[derive(Clone, Debug)]
pub struct Component {
    pub label: Tableau,
    /// Scalar formulas in `A`, `B`, each meaning `… = 0`.
    pub constraints: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Appendix {
    pub psi: PsiVector,
    /// Printed tableau of each entry of `psi`, in basis order.
    pub psi_labels: Vec<Tableau>,
    /// `Ř_1, Ř_2, Ř_3` in the spectral context.
    pub rmatrices: Vec<Operator>,
    pub rho: SignedPermutation,
    /// Arguments of the rotated side of the cyclicity relation.
    pub cyclic_args: Vec<Polynomial>,
    /// Placements for the wheel condition, in the context `z, w` where
    /// `w` stands for the unconstrained slot.
    pub wheel: Vec<Vec<Polynomial>>,
    /// Matrix formulas in `A`, `B`, each meaning `… = 0`.
    pub relations: Vec<String>,
    pub components: Vec<Component>,
    pub deformed_relations: Vec<String>,
    pub deformed_alpha: Vec<Vec<u16>>,
    pub deformed_constraints: Vec<String>,
}

impl Appendix {
    pub fn load() -> Result<Self> {
        Self::from_sources(&SOURCES.iter().map(|&(n, s)| (n.to_string(), s.to_string())).collect())
    }

    /// Parses a full set of fixture texts keyed by file name.
    pub fn from_sources(src: &BTreeMap<String, String>) -> Result<Self> {
        let get = |name: &str| -> Result<&str> {
            src.get(name)
                .map(String::as_str)
                .ok_or_else(|| anyhow!("fixture {name} missing"))
        };
        let (psi, psi_labels) = parse_multidegrees(get("multidegrees.tex")?)
            .context("multidegrees.tex")?;
        let (cyclic_args, rho) = parse_cyclicity(get("cyclicity.tex")?).context("cyclicity.tex")?;
        let (deformed_alpha, deformed_constraints) =
            parse_deformed_component(get("deformed_component.tex")?)
                .context("deformed_component.tex")?;
        Ok(Appendix {
            psi,
            psi_labels,
            rmatrices: parse_rmatrices(get("rmatrices.tex")?).context("rmatrices.tex")?,
            rho,
            cyclic_args,
            wheel: parse_wheel(get("wheel.tex")?).context("wheel.tex")?,
            relations: parse_relations(get("relations.tex")?).context("relations.tex")?,
            components: parse_components(get("components.tex")?).context("components.tex")?,
            deformed_relations: parse_aligned(get("deformed_relations.tex")?)
                .context("deformed_relations.tex")?,
            deformed_alpha,
            deformed_constraints,
        })
    }

    pub fn family(&self) -> FixtureFamily {
        FixtureFamily {
            labels: self.psi_labels.iter().map(|t| t.to_string()).collect(),
            sizes: M.to_vec(),
            exchanges: self.rmatrices.clone(),
            rotation: Some(self.rho.clone()),
        }
    }
}

/// The text right of `&=` (or `=`) on a line, without a trailing `\\`.
fn rhs(line: &str) -> &str {
    let s = line.split_once("&=").map_or(line, |(_, r)| r);
    s.trim().trim_end_matches("\\\\").trim()
}

fn parse_multidegrees(src: &str) -> Result<(PsiVector, Vec<Tableau>)> {
    let vars = VarSet::indexed(M.len());
    let mut printed = Vec::new();
    for line in src.lines().filter(|l| l.contains("\\Psi_")) {
        let t = tableaux(line)?
            .into_iter()
            .next()
            .ok_or_else(|| anyhow!("no tableau on {line:?}"))?;
        printed.push((t, parse_poly(rhs(line), &vars)?));
    }
    let labels = qkz_core::combinatorics::enumerate_tableaux(&LAMBDA, &M);
    if labels.len() != printed.len() {
        bail!("{} multidegrees printed, {} components expected", printed.len(), labels.len());
    }
    let mut entries = Vec::new();
    for t in &labels {
        let (_, p) = printed
            .iter()
            .find(|(u, _)| phi(u) == phi(t))
            .ok_or_else(|| anyhow!("no multidegree printed for {t}"))?;
        entries.push(p.clone());
    }
    let psi = PsiVector::new(K, &LAMBDA, &M, Basis::Component, entries)?;
    Ok((psi, labels))
}

fn parse_rmatrices(src: &str) -> Result<Vec<Operator>> {
    let spectral = VarSet::spectral();
    let mut out: BTreeMap<usize, Operator> = BTreeMap::new();
    let mut rest = 0;
    for body in environments(src, "array")? {
        let at = src[rest..].find(body).ok_or_else(|| anyhow!("array not found"))? + rest;
        let mut names = Vec::new();
        let head = &src[rest..at];
        let mut from = 0;
        while let Some(p) = head[from..].find("\\check R_") {
            let s = from + p + "\\check R_".len();
            let digits: String = head[s..].chars().take_while(char::is_ascii_digit).collect();
            names.push(digits.parse::<usize>()?);
            from = s;
        }
        let rows = array_cells(body)
            .iter()
            .map(|row| row.iter().map(|c| parse_rf(c, &spectral)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let op = Operator::from_dense(&spectral, rows)?;
        for n in names {
            out.insert(n, op.clone());
        }
        rest = at + body.len();
    }
    let expected: Vec<usize> = (1..M.len()).collect();
    if out.keys().copied().collect::<Vec<_>>() != expected {
        bail!("expected matrices for slots {expected:?}, found {:?}", out.keys());
    }
    Ok(out.into_values().collect())
}

fn parse_cyclicity(src: &str) -> Result<(Vec<Polynomial>, SignedPermutation)> {
    let vars = VarSet::indexed(M.len());
    let calls = call_args(src, "\\Psi")?;
    let [lhs, rhs] = calls.as_slice() else {
        bail!("expected two Ψ calls, found {}", calls.len());
    };
    let identity: Vec<String> = (1..=M.len()).map(|i| format!("z_{i}")).collect();
    if rhs != &identity {
        bail!("right side is not Ψ(z_1, …, z_N): {rhs:?}");
    }
    let args = lhs
        .iter()
        .map(|a| parse_poly(a, &vars))
        .collect::<Result<Vec<_>, _>>()?;
    let body = environments(src, "pmatrix")?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("no pmatrix for ρ"))?;
    let dense = array_cells(body)
        .iter()
        .map(|row| row.iter().map(|c| c.parse::<i64>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok((args, SignedPermutation::from_dense(&dense)?))
}

/// The context of the wheel placements: `z` and the free slot `w`.
pub fn wheel_vars() -> VarSet {
    VarSet::named(["z", "w"])
}

fn parse_wheel(src: &str) -> Result<Vec<Vec<Polynomial>>> {
    let vars = wheel_vars();
    let mut out = Vec::new();
    for args in call_args(src, "\\Psi")? {
        let row = args
            .iter()
            .map(|a| {
                if a == "\\cdot" {
                    Ok(Polynomial::var(&vars, 1))
                } else {
                    parse_poly(a, &vars).map_err(anyhow::Error::from)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != M.len() {
            bail!("wheel placement with {} arguments", row.len());
        }
        out.push(row);
    }
    Ok(out)
}

/// `X = Y = … = 0` as the list `X, Y, …`.
fn chain(src: &str) -> Result<Vec<String>> {
    let mut parts = split_top(src, '=');
    match parts.pop() {
        Some(z) if z.trim() == "0" => Ok(parts),
        _ => bail!("{src:?} does not end in = 0"),
    }
}

fn parse_relations(src: &str) -> Result<Vec<String>> {
    let flat = strip_layout(src).replace('\n', " ");
    let (_, body) = flat
        .split_once("}:")
        .ok_or_else(|| anyhow!("no set-builder colon"))?;
    let body = body.split("\\}").next().unwrap_or(body);
    chain(body.trim())
}

fn parse_components(src: &str) -> Result<Vec<Component>> {
    let mut out = Vec::new();
    for line in src.lines().filter(|l| l.contains("\\tableau")) {
        let label = tableaux(line)?
            .into_iter()
            .next()
            .ok_or_else(|| anyhow!("no tableau"))?;
        let (_, body) = line.split_once("A,B:").ok_or_else(|| anyhow!("no A,B:"))?;
        let body = body.trim().trim_end_matches("\\}").trim();
        out.push(Component {
            label,
            constraints: chain(body)?,
        });
    }
    Ok(out)
}

fn parse_aligned(src: &str) -> Result<Vec<String>> {
    let body = environments(src, "align*")?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("no align* block"))?;
    let mut out = Vec::new();
    for row in body.split("\\\\") {
        let row = row.replace('&', " ");
        if row.trim().is_empty() {
            continue;
        }
        out.extend(chain(row.trim())?);
    }
    Ok(out)
}

fn parse_deformed_component(src: &str) -> Result<(Vec<Vec<u16>>, Vec<String>)> {
    let start = src.find("\\alpha=(").ok_or_else(|| anyhow!("α not given"))? + "\\alpha=(".len();
    let stop = src[start..].find(")$").ok_or_else(|| anyhow!("α not closed"))? + start;
    let inner = src[start..stop].replace("\\{", "{").replace("\\}", "}");
    let alpha = split_top(&inner, ',')
        .iter()
        .map(|s| {
            s.trim_matches(|c| c == '{' || c == '}')
                .split(',')
                .map(|x| x.trim().parse::<u16>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let body = environments(src, "align*")?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("no align* block"))?;
    let mut constraints = Vec::new();
    for row in body.split("\\\\") {
        let row = row.replace('&', " ");
        let row = row.trim();
        if row.contains("\\sum_{a\\in\\alpha_i} t_a") {
            if !row.contains("B_{i,i}=-\\prod_{a\\in\\alpha_i} t_a") {
                bail!("diagonal of B not in the expected form");
            }
            for (i, s) in alpha.iter().enumerate() {
                let i = i + 1;
                let sum: Vec<String> = s.iter().map(|a| format!("t_{a}")).collect();
                constraints.push(format!("A_{{{i},{i}}} - ({})", sum.join("+")));
                constraints.push(format!("B_{{{i},{i}}} + {}", sum.join(" ")));
            }
            continue;
        }
        let row = row.trim_end_matches("\\big\\}").trim();
        if row.ends_with("=0") {
            constraints.extend(chain(row)?);
        }
    }
    Ok((alpha, constraints))
}
