//! Line-based text formats: `.smi` instances, `.smm` matchings, `.sma` action lists.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{valid_name, Action, AgentRef, Instance, Matching, ModelError, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unsupported header `{0}`")]
    Header(String),
    #[error("unexpected `{0}`")]
    Syntax(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("`{0}` is declared twice")]
    DuplicateAgent(String),
    #[error("`{0}` appears twice in the list")]
    DuplicateEntry(String),
    #[error("`{0}` has two preference lines")]
    DuplicatePref(String),
    #[error("`{0}` is on the same side as the list owner")]
    WrongSide(String),
    #[error("`{0}` appears before the men and women are declared")]
    Undeclared(String),
    #[error("{0}")]
    Model(ModelError),
}

/// A whitespace token with its 1-based column.
struct Tok<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str, offset: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], column: offset + s + 1 });
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Splits `key ...: rest` into the key part and the value tokens.
fn split_colon(line: &str) -> Option<(Vec<Tok<'_>>, Vec<Tok<'_>>)> {
    let pos = line.find(':')?;
    Some((tokens(&line[..pos], 0), tokens(&line[pos + 1..], pos + 1)))
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, &'a str);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, raw) in self.inner.by_ref() {
            let line = strip_comment(raw);
            if !line.trim().is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn check_header(line_no: usize, line: &str, magic: &str) -> Result<bool, ParseError> {
    let toks = tokens(line, 0);
    if toks.first().map(|t| t.text) != Some(magic) {
        return Ok(false);
    }
    if toks.len() != 2 || toks[1].text != "1" {
        return Err(err(line_no, 1, ParseErrorKind::Header(line.trim().to_string())));
    }
    Ok(true)
}

/// Parses the `.smi` format.
///
/// ```text
/// smi 1
/// men: a b
/// women: x y
/// addable-women: y
/// pref a: x y
/// pref b: y
/// pref x: a
/// pref y: b a
/// ```
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut names: [Option<Vec<String>>; 2] = [None, None];
    let mut index: BTreeMap<String, AgentRef> = BTreeMap::new();
    let mut addable: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut lists: BTreeMap<AgentRef, Vec<usize>> = BTreeMap::new();
    let mut first = true;

    for (line_no, line) in Lines::new(text) {
        if std::mem::take(&mut first) && check_header(line_no, line, "smi")? {
            continue;
        }
        let (key, values) = split_colon(line)
            .ok_or_else(|| err(line_no, 1, ParseErrorKind::Syntax(line.trim().to_string())))?;
        let keyword = key.first().map(|t| t.text).unwrap_or("");
        match (keyword, key.len()) {
            ("men", 1) | ("women", 1) => {
                let side = if keyword == "men" { Side::Man } else { Side::Woman };
                if names[side.idx()].is_some() {
                    return Err(err(line_no, 1, ParseErrorKind::DuplicateAgent(keyword.to_string())));
                }
                let mut declared = Vec::new();
                for tok in values {
                    if !valid_name(tok.text) {
                        return Err(err(line_no, tok.column, ParseErrorKind::InvalidName(tok.text.into())));
                    }
                    let r = AgentRef::new(side, declared.len());
                    if index.insert(tok.text.to_string(), r).is_some() {
                        return Err(err(line_no, tok.column, ParseErrorKind::DuplicateAgent(tok.text.into())));
                    }
                    declared.push(tok.text.to_string());
                }
                names[side.idx()] = Some(declared);
            }
            ("addable-men", 1) | ("addable-women", 1) => {
                let side = if keyword == "addable-men" { Side::Man } else { Side::Woman };
                for tok in values {
                    match index.get(tok.text) {
                        Some(r) if r.side == side => addable[side.idx()].push(r.index),
                        Some(_) => return Err(err(line_no, tok.column, ParseErrorKind::WrongSide(tok.text.into()))),
                        None => return Err(err(line_no, tok.column, ParseErrorKind::UnknownAgent(tok.text.into()))),
                    }
                }
            }
            ("pref", 2) => {
                let owner_tok = &key[1];
                let owner = *index
                    .get(owner_tok.text)
                    .ok_or_else(|| err(line_no, owner_tok.column, ParseErrorKind::UnknownAgent(owner_tok.text.into())))?;
                let mut list = Vec::with_capacity(values.len());
                for tok in values {
                    let r = index
                        .get(tok.text)
                        .ok_or_else(|| err(line_no, tok.column, ParseErrorKind::UnknownAgent(tok.text.into())))?;
                    if r.side == owner.side {
                        return Err(err(line_no, tok.column, ParseErrorKind::WrongSide(tok.text.into())));
                    }
                    if list.contains(&r.index) {
                        return Err(err(line_no, tok.column, ParseErrorKind::DuplicateEntry(tok.text.into())));
                    }
                    list.push(r.index);
                }
                if lists.insert(owner, list).is_some() {
                    return Err(err(line_no, owner_tok.column, ParseErrorKind::DuplicatePref(owner_tok.text.into())));
                }
            }
            _ => return Err(err(line_no, 1, ParseErrorKind::Syntax(line.trim().to_string()))),
        }
    }

    let [men, women] = names;
    let men = men.unwrap_or_default();
    let women = women.unwrap_or_default();
    let side_lists = |side: Side, count: usize| -> Vec<Vec<usize>> {
        (0..count).map(|i| lists.get(&AgentRef::new(side, i)).cloned().unwrap_or_default()).collect()
    };
    let model = |e| err(0, 0, ParseErrorKind::Model(e));
    Instance::new(side_lists(Side::Man, men.len()), side_lists(Side::Woman, women.len()))
        .and_then(|i| i.with_labels(men, women))
        .and_then(|i| {
            let [am, aw] = addable;
            i.with_addable(am, aw)
        })
        .map_err(model)
}

/// Canonical `.smi` text; `parse_instance` inverts it exactly.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::from("smi 1\n");
    let names = |side: Side, idx: &mut dyn Iterator<Item = usize>| -> String {
        idx.map(|i| inst.label(AgentRef::new(side, i))).collect::<Vec<_>>().join(" ")
    };
    let header = |key: &str, body: String| if body.is_empty() { format!("{key}:\n") } else { format!("{key}: {body}\n") };
    out += &header("men", names(Side::Man, &mut (0..inst.men_count())));
    out += &header("women", names(Side::Woman, &mut (0..inst.women_count())));
    for (side, key) in [(Side::Man, "addable-men"), (Side::Woman, "addable-women")] {
        if !inst.addable(side).is_empty() {
            out += &header(key, names(side, &mut inst.addable(side).iter().copied()));
        }
    }
    for side in [Side::Man, Side::Woman] {
        for i in 0..inst.count(side) {
            let owner = inst.label(AgentRef::new(side, i));
            let body = names(side.other(), &mut inst.prefs(side, i).iter().copied());
            out += &header(&format!("pref {owner}"), body);
        }
    }
    out
}

fn lookup(inst: &Instance, line: usize, tok: &Tok<'_>, side: Option<Side>) -> Result<AgentRef, ParseError> {
    match inst.find_label(tok.text) {
        Some(r) if side.map_or(true, |s| s == r.side) => Ok(r),
        Some(_) => Err(err(line, tok.column, ParseErrorKind::WrongSide(tok.text.into()))),
        None => Err(err(line, tok.column, ParseErrorKind::UnknownAgent(tok.text.into()))),
    }
}

/// Parses `.smm` text against the instance whose labels it uses.
pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching, ParseError> {
    let mut pairs = Vec::new();
    let mut first = true;
    for (line_no, line) in Lines::new(text) {
        if std::mem::take(&mut first) && check_header(line_no, line, "smm")? {
            continue;
        }
        let toks = tokens(line, 0);
        if toks.len() != 3 || toks[0].text != "pair" {
            return Err(err(line_no, 1, ParseErrorKind::Syntax(line.trim().to_string())));
        }
        let m = lookup(inst, line_no, &toks[1], Some(Side::Man))?;
        let w = lookup(inst, line_no, &toks[2], Some(Side::Woman))?;
        pairs.push((m.index, w.index));
    }
    Matching::from_pairs(inst.men_count(), inst.women_count(), pairs).map_err(|e| err(0, 0, ParseErrorKind::Model(e)))
}

pub fn serialize_matching(m: &Matching, inst: &Instance) -> String {
    let mut out = String::from("smm 1\n");
    for (a, b) in m.pairs() {
        let _ = writeln!(out, "pair {} {}", inst.label(AgentRef::man(a)), inst.label(AgentRef::woman(b)));
    }
    out
}

/// Parses `.sma` action lines (`swap`, `reorder`, `accdel`, `del`, `add`).
pub fn parse_actions(text: &str, inst: &Instance) -> Result<Vec<Action>, ParseError> {
    let mut out = Vec::new();
    for (line_no, line) in Lines::new(text) {
        let toks = tokens(line, 0);
        let syntax = || err(line_no, 1, ParseErrorKind::Syntax(line.trim().to_string()));
        let act = match toks[0].text {
            "swap" if toks.len() == 3 => {
                let agent = lookup(inst, line_no, &toks[1], None)?;
                let position = toks[2].text.parse().map_err(|_| syntax())?;
                Action::Swap { agent, position }
            }
            "reorder" => {
                let (key, values) = split_colon(line).ok_or_else(syntax)?;
                if key.len() != 2 {
                    return Err(syntax());
                }
                let agent = lookup(inst, line_no, &key[1], None)?;
                let list = values
                    .iter()
                    .map(|t| lookup(inst, line_no, t, Some(agent.side.other())).map(|r| r.index))
                    .collect::<Result<_, _>>()?;
                Action::Reorder { agent, list }
            }
            "accdel" if toks.len() == 3 => Action::AccDelete {
                man: lookup(inst, line_no, &toks[1], Some(Side::Man))?.index,
                woman: lookup(inst, line_no, &toks[2], Some(Side::Woman))?.index,
            },
            "del" if toks.len() == 2 => Action::DeleteAgent(lookup(inst, line_no, &toks[1], None)?),
            "add" if toks.len() == 2 => Action::AddAgent(lookup(inst, line_no, &toks[1], None)?),
            _ => return Err(syntax()),
        };
        out.push(act);
    }
    Ok(out)
}

/// One `.sma` line for an action.
pub fn format_action(act: &Action, inst: &Instance) -> String {
    match act {
        Action::Swap { agent, position } => format!("swap {} {}", inst.label(*agent), position),
        Action::Reorder { agent, list } => {
            let other = agent.side.other();
            let names: Vec<&str> = list.iter().map(|&i| inst.label(AgentRef::new(other, i))).collect();
            if names.is_empty() {
                format!("reorder {}:", inst.label(*agent))
            } else {
                format!("reorder {}: {}", inst.label(*agent), names.join(" "))
            }
        }
        Action::AccDelete { man, woman } => {
            format!("accdel {} {}", inst.label(AgentRef::man(*man)), inst.label(AgentRef::woman(*woman)))
        }
        Action::DeleteAgent(a) => format!("del {}", inst.label(*a)),
        Action::AddAgent(a) => format!("add {}", inst.label(*a)),
    }
}

pub fn serialize_actions(acts: &[Action], inst: &Instance) -> String {
    acts.iter().map(|a| format_action(a, inst) + "\n").collect()
}
