//! The network file format: a `vars` line followed by `top` and `dir`
//! constraint lines, with `#` comments. Unspecified pairs stay universal;
//! converses are filled in automatically and checked when both directions
//! are given.

use std::collections::HashSet;

use qsr::algebra::Relation;
use qsr::boxes::{cardinal, ra_calculus, Cardinal, RaBasic};
use qsr::interaction::JointNetwork;
use qsr::interval::{IaBasic, IA_TOKENS};
use qsr::topology::{rcc8_calculus, RCC8_TOKENS};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

fn parse_top_spec(spec: &str, line: usize) -> Result<Relation, ParseError> {
    let rcc = rcc8_calculus();
    let mut rel = rcc.empty();
    for tok in spec.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            return err(line, "empty relation token");
        }
        if tok == "T" {
            rel = rel.union(&rcc.universal());
            continue;
        }
        match RCC8_TOKENS.iter().position(|t| t.eq_ignore_ascii_case(tok)) {
            Some(i) => rel = rel.union(&rcc.basic(i)),
            None => return err(line, format!("unknown topological token `{tok}`")),
        }
    }
    Ok(rel)
}

fn ia_group(tok: &str, line: usize) -> Result<Vec<IaBasic>, ParseError> {
    let named: Option<&[IaBasic]> = match tok {
        "MO" => Some(&[IaBasic::M, IaBasic::O]),
        "SDF" => Some(&[IaBasic::S, IaBasic::D, IaBasic::F]),
        "SDFI" => Some(&[IaBasic::Si, IaBasic::Di, IaBasic::Fi]),
        "MOI" => Some(&[IaBasic::Mi, IaBasic::Oi]),
        "SDFEQ" => Some(&[IaBasic::S, IaBasic::D, IaBasic::F, IaBasic::Eq]),
        "T" => Some(&crate::format::ALL_IA),
        _ => None,
    };
    if let Some(g) = named {
        return Ok(g.to_vec());
    }
    match IaBasic::from_token(tok) {
        Some(b) => Ok(vec![b]),
        None => err(line, format!("unknown interval token `{tok}`")),
    }
}

pub(crate) const ALL_IA: [IaBasic; 13] = [
    IaBasic::B,
    IaBasic::M,
    IaBasic::O,
    IaBasic::S,
    IaBasic::D,
    IaBasic::F,
    IaBasic::Eq,
    IaBasic::Fi,
    IaBasic::Di,
    IaBasic::Si,
    IaBasic::Oi,
    IaBasic::Mi,
    IaBasic::Bi,
];

fn parse_axis(group: &str, line: usize) -> Result<Vec<IaBasic>, ParseError> {
    let group = group.strip_prefix('(').unwrap_or(group);
    let group = group.strip_suffix(')').unwrap_or(group);
    let mut out = Vec::new();
    for tok in group.split('|') {
        let tok = tok.trim();
        if tok.is_empty() {
            return err(line, "empty axis token");
        }
        for b in ia_group(tok, line)? {
            if !out.contains(&b) {
                out.push(b);
            }
        }
    }
    Ok(out)
}

fn parse_dir_spec(spec: &str, line: usize) -> Result<Relation, ParseError> {
    let ra = ra_calculus();
    let mut rel = ra.empty();
    for term in spec.split(',') {
        let term = term.trim();
        if term.is_empty() {
            return err(line, "empty relation term");
        }
        let macro_rel = match term {
            "T" => Some(ra.universal()),
            "W" => Some(cardinal(Cardinal::West)),
            "E" => Some(cardinal(Cardinal::East)),
            "N" => Some(cardinal(Cardinal::North)),
            "S" => Some(cardinal(Cardinal::South)),
            _ => None,
        };
        if let Some(m) = macro_rel {
            rel = rel.union(&m);
            continue;
        }
        let Some((gx, gy)) = term.split_once('*') else {
            return err(line, format!("expected `x*y` term, got `{term}`"));
        };
        for x in parse_axis(gx, line)? {
            for y in parse_axis(gy, line)? {
                rel = rel.union(&ra.basic(RaBasic::new(x, y).index()));
            }
        }
    }
    Ok(rel)
}

pub fn parse_network(text: &str) -> Result<JointNetwork, ParseError> {
    let mut net: Option<JointNetwork> = None;
    let mut top_seen: HashSet<(usize, usize)> = HashSet::new();
    let mut dir_seen: HashSet<(usize, usize)> = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "vars" => {
                if net.is_some() {
                    return err(lineno, "duplicate vars line");
                }
                let names: Vec<String> = words.map(str::to_string).collect();
                if names.is_empty() {
                    return err(lineno, "vars line needs at least one name");
                }
                let mut seen = HashSet::new();
                for n in &names {
                    if !n.chars().next().unwrap().is_ascii_alphabetic() && !n.starts_with('_') {
                        return err(lineno, format!("invalid variable name `{n}`"));
                    }
                    if !seen.insert(n.clone()) {
                        return err(lineno, format!("duplicate variable `{n}`"));
                    }
                }
                net = Some(JointNetwork::universal(names));
            }
            "top" | "dir" => {
                let Some(net) = net.as_mut() else {
                    return err(lineno, "constraint before the vars line");
                };
                let (Some(a), Some(b)) = (words.next(), words.next()) else {
                    return err(lineno, "expected `top|dir FROM TO RELATION`");
                };
                let spec: String = words.collect::<Vec<_>>().join(" ");
                if spec.is_empty() {
                    return err(lineno, "missing relation");
                }
                let i = match net.vars.iter().position(|v| v == a) {
                    Some(i) => i,
                    None => return err(lineno, format!("unknown variable `{a}`")),
                };
                let j = match net.vars.iter().position(|v| v == b) {
                    Some(j) => j,
                    None => return err(lineno, format!("unknown variable `{b}`")),
                };
                let spec = spec.replace(' ', "");
                let (rel, seen, side_name) = if head == "top" {
                    (parse_top_spec(&spec, lineno)?, &mut top_seen, "top")
                } else {
                    (parse_dir_spec(&spec, lineno)?, &mut dir_seen, "dir")
                };
                if i == j {
                    let identity = if head == "top" {
                        rcc8_calculus().identity()
                    } else {
                        ra_calculus().identity()
                    };
                    if rel != identity {
                        return err(lineno, format!("diagonal {side_name} constraint on `{a}` conflicts with identity"));
                    }
                    continue;
                }
                if !seen.insert((i, j)) {
                    return err(lineno, format!("duplicate {side_name} constraint for `{a} {b}`"));
                }
                if seen.contains(&(j, i)) {
                    let existing = if head == "top" { net.top.get(j, i) } else { net.dir.get(j, i) };
                    if existing.converse() != rel {
                        return err(
                            lineno,
                            format!("{side_name} constraint for `{a} {b}` conflicts with the converse of `{b} {a}`"),
                        );
                    }
                    continue;
                }
                if head == "top" {
                    net.top.set(i, j, rel);
                } else {
                    net.dir.set(i, j, rel);
                }
            }
            other => return err(lineno, format!("unknown directive `{other}`")),
        }
    }
    match net {
        Some(n) => Ok(n),
        None => err(0, "missing vars line"),
    }
}

/// Canonical topological relation spec: comma-joined basic tokens, `T` for
/// the universal relation.
pub fn top_spec(rel: &Relation) -> String {
    if rel.is_universal() {
        return "T".to_string();
    }
    rel.basics().map(|i| RCC8_TOKENS[i]).collect::<Vec<_>>().join(",")
}

/// Canonical directional relation spec: `T` for universal, otherwise
/// `x*(...)` terms factorized by identical y-sets.
pub fn dir_spec(rel: &Relation) -> String {
    if rel.is_universal() {
        return "T".to_string();
    }
    // rows[x] = set of y components present with x
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); 13];
    for b in rel.basics() {
        rows[b / 13].push(b % 13);
    }
    let axis = |ys: &[usize]| -> String {
        if ys.len() == 13 {
            return "T".to_string();
        }
        let toks: Vec<&str> = ys.iter().map(|&y| IA_TOKENS[y]).collect();
        if toks.len() == 1 {
            toks[0].to_string()
        } else {
            format!("({})", toks.join("|"))
        }
    };
    let mut terms: Vec<String> = Vec::new();
    let mut emitted = vec![false; 13];
    for x in 0..13 {
        if rows[x].is_empty() || emitted[x] {
            continue;
        }
        let group: Vec<usize> = (x..13).filter(|&x2| rows[x2] == rows[x]).collect();
        for &g in &group {
            emitted[g] = true;
        }
        let xs: Vec<&str> = group.iter().map(|&g| IA_TOKENS[g]).collect();
        let x_spec = if xs.len() == 13 {
            "T".to_string()
        } else if xs.len() == 1 {
            xs[0].to_string()
        } else {
            format!("({})", xs.join("|"))
        };
        terms.push(format!("{}*{}", x_spec, axis(&rows[x])));
    }
    terms.join(",")
}

/// Canonical text form. Universal pairs are omitted; only pairs (i, j)
/// with i < j are written.
pub fn serialize_network(net: &JointNetwork) -> String {
    let mut out = String::new();
    out.push_str("vars ");
    out.push_str(&net.vars.join(" "));
    out.push('\n');
    for (i, j) in net.top.pairs() {
        let rel = net.top.get(i, j);
        if !rel.is_universal() {
            out.push_str(&format!("top {} {} {}\n", net.vars[i], net.vars[j], top_spec(&rel)));
        }
    }
    for (i, j) in net.dir.pairs() {
        let rel = net.dir.get(i, j);
        if !rel.is_universal() {
            out.push_str(&format!("dir {} {} {}\n", net.vars[i], net.vars[j], dir_spec(&rel)));
        }
    }
    out
}
