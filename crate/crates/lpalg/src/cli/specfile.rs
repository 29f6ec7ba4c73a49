//! The task-file format: a line-based key-value tree with sections
//! `[group.NAME]`, `[action.NAME]`, `[groupoid.NAME]`, `[algebra.NAME]`,
//! and `[task.N]`. Integers for tables, rationals as `p/q`, complex
//! rationals as `a/b+c/d i`, nested lists in brackets.
//!
//! ```text
//! [group.Z2]
//! kind = cyclic
//! order = 2
//!
//! [groupoid.pair2]
//! kind = pair
//! points = 2
//!
//! [task.1]
//! command = core
//! groupoid = pair2
//! p = 3/2
//! ```

use crate::groupoid::GroupoidTables;
use crate::lp_norms::PExponent;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, message: message.into() })
}

/// A parsed value: integer, bare word (rationals and complex scalars are
/// words at this level), quoted string, or list.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecValue {
    Int(i64),
    Word(String),
    Str(String),
    List(Vec<SpecValue>),
}

impl SpecValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            SpecValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_usize(&self) -> Option<usize> {
        self.as_int().and_then(|v| usize::try_from(v).ok())
    }

    pub fn as_word(&self) -> Option<&str> {
        match self {
            SpecValue::Word(w) => Some(w),
            SpecValue::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SpecValue]> {
        match self {
            SpecValue::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_usize_list(&self) -> Option<Vec<usize>> {
        self.as_list()?.iter().map(SpecValue::as_usize).collect()
    }

    pub fn as_usize_table(&self) -> Option<Vec<Vec<usize>>> {
        self.as_list()?.iter().map(SpecValue::as_usize_list).collect()
    }
}

/// One `[kind.name]` section with its key-value pairs (dotted keys kept
/// verbatim) and the line it started on.
#[derive(Clone, Debug)]
pub struct Section {
    pub kind: String,
    pub name: String,
    pub line: usize,
    pub entries: BTreeMap<String, (SpecValue, usize)>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&SpecValue> {
        self.entries.get(key).map(|(v, _)| v)
    }

    pub fn require(&self, key: &str) -> Result<&SpecValue, ParseError> {
        match self.get(key) {
            Some(v) => Ok(v),
            None => err(
                self.line,
                1,
                format!("section [{}.{}] is missing key '{key}'", self.kind, self.name),
            ),
        }
    }

    pub fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(self.line, |(_, l)| *l)
    }
}

/// How a groupoid is built when a task first needs it.
#[derive(Clone, Debug)]
pub enum GroupoidDef {
    Units(usize),
    Pair(usize),
    Group(String),
    Transformation(String),
    Tables(GroupoidTables),
}

#[derive(Clone, Debug)]
pub enum GroupDef {
    Cyclic(usize),
    Symmetric(usize),
    Product(String, String),
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug)]
pub enum ActionDef {
    /// Permutations of a point set, one per group element.
    Space { group: String, perms: Vec<Vec<usize>> },
    Translation { group: String },
    Rotation { order: usize },
    Trivial { group: String, points: usize },
    /// Conjugation action on a represented algebra; implementers are a
    /// permutation plus unimodular diagonal per group element.
    Algebra {
        group: String,
        algebra: String,
        perms: Vec<Vec<usize>>,
        diags: Vec<Vec<String>>,
    },
}

#[derive(Clone, Debug)]
pub enum AlgebraDef {
    Full(usize),
    Upper(usize),
    Diagonal(usize),
    Scalars(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Core,
    Weyl,
    Coe,
    Norms,
    Crossed,
    Leavitt,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Core => "core",
            Command::Weyl => "weyl",
            Command::Coe => "coe",
            Command::Norms => "norms",
            Command::Crossed => "crossed",
            Command::Leavitt => "leavitt",
        }
    }
}

/// One task: a command plus resolved object references and parameters.
#[derive(Clone, Debug)]
pub struct TaskSpec {
    pub index: usize,
    pub command: Command,
    pub groupoid: Option<String>,
    pub algebra: Option<String>,
    pub action: Option<String>,
    pub left: Option<String>,
    pub right: Option<String>,
    pub p: Option<PExponent>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub check: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub zero_entry: Option<(usize, usize)>,
    pub max_bisections: Option<u128>,
    pub max_nodes: Option<u64>,
}

/// A fully parsed and reference-checked task file.
#[derive(Debug)]
pub struct SpecFile {
    pub groups: BTreeMap<String, GroupDef>,
    pub actions: BTreeMap<String, ActionDef>,
    pub groupoids: BTreeMap<String, GroupoidDef>,
    pub algebras: BTreeMap<String, AlgebraDef>,
    pub tasks: Vec<TaskSpec>,
}

// ---------------------------------------------------------------------------
// Tokenizer / value parser
// ---------------------------------------------------------------------------

fn parse_value(text: &str, line: usize, col0: usize) -> Result<(SpecValue, usize), ParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let value = parse_value_at(&bytes, &mut pos, line, col0)?;
    skip_ws(&bytes, &mut pos);
    if pos != bytes.len() {
        return err(line, col0 + pos, format!("trailing input '{}'", &text[pos..]));
    }
    Ok((value, pos))
}

fn skip_ws(bytes: &[char], pos: &mut usize) {
    while *pos < bytes.len() && (bytes[*pos] == ' ' || bytes[*pos] == '\t' || bytes[*pos] == ',') {
        *pos += 1;
    }
}

fn parse_value_at(
    bytes: &[char],
    pos: &mut usize,
    line: usize,
    col0: usize,
) -> Result<SpecValue, ParseError> {
    skip_ws(bytes, pos);
    if *pos >= bytes.len() {
        return err(line, col0 + *pos, "expected a value");
    }
    match bytes[*pos] {
        '[' => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(bytes, pos);
                if *pos >= bytes.len() {
                    return err(line, col0 + *pos, "unclosed '['");
                }
                if bytes[*pos] == ']' {
                    *pos += 1;
                    return Ok(SpecValue::List(items));
                }
                items.push(parse_value_at(bytes, pos, line, col0)?);
            }
        }
        '"' => {
            *pos += 1;
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos] != '"' {
                *pos += 1;
            }
            if *pos >= bytes.len() {
                return err(line, col0 + start, "unterminated string");
            }
            let s: String = bytes[start..*pos].iter().collect();
            *pos += 1;
            Ok(SpecValue::Str(s))
        }
        _ => {
            let start = *pos;
            while *pos < bytes.len()
                && !matches!(bytes[*pos], ' ' | '\t' | ',' | ']' | '[' | '"')
            {
                *pos += 1;
            }
            let token: String = bytes[start..*pos].iter().collect();
            if let Ok(v) = token.parse::<i64>() {
                Ok(SpecValue::Int(v))
            } else {
                Ok(SpecValue::Word(token))
            }
        }
    }
}

/// Splits the raw text into sections with located key-value entries.
pub fn parse_sections(text: &str) -> Result<Vec<Section>, ParseError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        // Strip comments outside quotes.
        let mut in_quotes = false;
        let mut content = String::new();
        for c in raw_line.chars() {
            if c == '"' {
                in_quotes = !in_quotes;
            }
            if c == '#' && !in_quotes {
                break;
            }
            content.push(c);
        }
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(body) = rest.strip_suffix(']') else {
                return err(line_no, 1, "section header must end with ']'");
            };
            let Some((kind, name)) = body.split_once('.') else {
                return err(line_no, 2, format!("section '{body}' must look like kind.name"));
            };
            let kind = kind.trim().to_string();
            if !matches!(kind.as_str(), "group" | "action" | "groupoid" | "algebra" | "task") {
                return err(line_no, 2, format!("unknown section kind '{kind}'"));
            }
            sections.push(Section {
                kind,
                name: name.trim().to_string(),
                line: line_no,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let Some((key, value_text)) = trimmed.split_once('=') else {
            return err(line_no, 1, format!("expected 'key = value', got '{trimmed}'"));
        };
        let Some(section) = sections.last_mut() else {
            return err(line_no, 1, "key-value pair before any section header");
        };
        let key = key.trim().to_string();
        let col0 = raw_line.find('=').map_or(1, |p| p + 2);
        let (value, _) = parse_value(value_text.trim(), line_no, col0)?;
        if section.entries.insert(key.clone(), (value, line_no)).is_some() {
            return err(line_no, 1, format!("duplicate key '{key}'"));
        }
    }
    Ok(sections)
}

// ---------------------------------------------------------------------------
// Section loaders
// ---------------------------------------------------------------------------

fn load_group(section: &Section) -> Result<GroupDef, ParseError> {
    let kind = section.require("kind")?.as_word().unwrap_or("").to_string();
    match kind.as_str() {
        "cyclic" => Ok(GroupDef::Cyclic(
            section.require("order")?.as_usize().ok_or_else(|| ParseError {
                line: section.line_of("order"),
                col: 1,
                message: "order must be a positive integer".into(),
            })?,
        )),
        "symmetric" => Ok(GroupDef::Symmetric(
            section.require("degree")?.as_usize().ok_or_else(|| ParseError {
                line: section.line_of("degree"),
                col: 1,
                message: "degree must be a positive integer".into(),
            })?,
        )),
        "product" => Ok(GroupDef::Product(
            section.require("left")?.as_word().unwrap_or("").to_string(),
            section.require("right")?.as_word().unwrap_or("").to_string(),
        )),
        "table" => {
            let table = section.require("table")?.as_usize_table().ok_or_else(|| ParseError {
                line: section.line_of("table"),
                col: 1,
                message: "table must be a list of integer rows".into(),
            })?;
            Ok(GroupDef::Table(table))
        }
        other => err(section.line, 1, format!("unknown group kind '{other}'")),
    }
}

fn load_action(section: &Section) -> Result<ActionDef, ParseError> {
    let kind = section.require("kind")?.as_word().unwrap_or("").to_string();
    let group_of = |s: &Section| -> Result<String, ParseError> {
        Ok(s.require("group")?.as_word().unwrap_or("").to_string())
    };
    match kind.as_str() {
        "space" => {
            let perms = section.require("perms")?.as_usize_table().ok_or_else(|| ParseError {
                line: section.line_of("perms"),
                col: 1,
                message: "perms must be a list of integer rows".into(),
            })?;
            Ok(ActionDef::Space { group: group_of(section)?, perms })
        }
        "translation" => Ok(ActionDef::Translation { group: group_of(section)? }),
        "rotation" => Ok(ActionDef::Rotation {
            order: section.require("order")?.as_usize().ok_or_else(|| ParseError {
                line: section.line_of("order"),
                col: 1,
                message: "order must be a positive integer".into(),
            })?,
        }),
        "trivial" => Ok(ActionDef::Trivial {
            group: group_of(section)?,
            points: section.require("points")?.as_usize().ok_or_else(|| ParseError {
                line: section.line_of("points"),
                col: 1,
                message: "points must be a positive integer".into(),
            })?,
        }),
        "algebra" => {
            let algebra = section.require("algebra")?.as_word().unwrap_or("").to_string();
            let mut perms = Vec::new();
            let mut diags = Vec::new();
            for g in 0.. {
                let pk = format!("impl.{g}.perm");
                let dk = format!("impl.{g}.diag");
                match (section.get(&pk), section.get(&dk)) {
                    (None, None) => break,
                    (Some(p), Some(d)) => {
                        perms.push(p.as_usize_list().ok_or_else(|| ParseError {
                            line: section.line_of(&pk),
                            col: 1,
                            message: format!("{pk} must be an integer list"),
                        })?);
                        let diag: Option<Vec<String>> = d
                            .as_list()
                            .map(|items| {
                                items
                                    .iter()
                                    .map(|v| v.as_word().map(str::to_string))
                                    .collect::<Option<Vec<_>>>()
                            })
                            .unwrap_or(None);
                        diags.push(diag.ok_or_else(|| ParseError {
                            line: section.line_of(&dk),
                            col: 1,
                            message: format!("{dk} must be a list of scalars"),
                        })?);
                    }
                    _ => {
                        return err(
                            section.line,
                            1,
                            format!("implementer {g} needs both perm and diag"),
                        );
                    }
                }
            }
            if perms.is_empty() {
                return err(section.line, 1, "algebra action needs impl.G.perm/diag entries");
            }
            Ok(ActionDef::Algebra { group: group_of(section)?, algebra, perms, diags })
        }
        other => err(section.line, 1, format!("unknown action kind '{other}'")),
    }
}

fn load_groupoid(section: &Section) -> Result<GroupoidDef, ParseError> {
    let kind = section.require("kind")?.as_word().unwrap_or("").to_string();
    let points = |s: &Section| -> Result<usize, ParseError> {
        s.require("points")?.as_usize().ok_or_else(|| ParseError {
            line: s.line_of("points"),
            col: 1,
            message: "points must be a positive integer".into(),
        })
    };
    match kind.as_str() {
        "units" => Ok(GroupoidDef::Units(points(section)?)),
        "pair" => Ok(GroupoidDef::Pair(points(section)?)),
        "group" => Ok(GroupoidDef::Group(
            section.require("group")?.as_word().unwrap_or("").to_string(),
        )),
        "transformation" => Ok(GroupoidDef::Transformation(
            section.require("action")?.as_word().unwrap_or("").to_string(),
        )),
        "tables" => {
            let n_arrows = section.require("arrows")?.as_usize().ok_or_else(|| ParseError {
                line: section.line_of("arrows"),
                col: 1,
                message: "arrows must be a positive integer".into(),
            })?;
            let inverse = section.require("inverse")?.as_usize_list().ok_or_else(|| ParseError {
                line: section.line_of("inverse"),
                col: 1,
                message: "inverse must be an integer list".into(),
            })?;
            let triples = section.require("compose")?.as_usize_table().ok_or_else(|| ParseError {
                line: section.line_of("compose"),
                col: 1,
                message: "compose must be a list of [g, h, gh] triples".into(),
            })?;
            let mut compose = vec![None; n_arrows * n_arrows];
            for t in &triples {
                if t.len() != 3 || t[0] >= n_arrows || t[1] >= n_arrows || t[2] >= n_arrows {
                    return err(
                        section.line_of("compose"),
                        1,
                        format!("invalid compose triple {t:?}"),
                    );
                }
                compose[t[0] * n_arrows + t[1]] = Some(t[2]);
            }
            Ok(GroupoidDef::Tables(GroupoidTables { n_arrows, inverse, compose, labels: None }))
        }
        other => err(section.line, 1, format!("unknown groupoid kind '{other}'")),
    }
}

fn load_algebra(section: &Section) -> Result<AlgebraDef, ParseError> {
    let kind = section.require("kind")?.as_word().unwrap_or("").to_string();
    let n = section.require("n")?.as_usize().ok_or_else(|| ParseError {
        line: section.line_of("n"),
        col: 1,
        message: "n must be a positive integer".into(),
    })?;
    match kind.as_str() {
        "full" => Ok(AlgebraDef::Full(n)),
        "upper" => Ok(AlgebraDef::Upper(n)),
        "diagonal" => Ok(AlgebraDef::Diagonal(n)),
        "scalars" => Ok(AlgebraDef::Scalars(n)),
        other => err(section.line, 1, format!("unknown algebra kind '{other}'")),
    }
}

fn load_task(section: &Section) -> Result<TaskSpec, ParseError> {
    let index: usize = section.name.parse().map_err(|_| ParseError {
        line: section.line,
        col: 1,
        message: format!("task name '{}' must be an integer", section.name),
    })?;
    let command = match section.require("command")?.as_word() {
        Some("validate") => Command::Validate,
        Some("core") => Command::Core,
        Some("weyl") => Command::Weyl,
        Some("coe") => Command::Coe,
        Some("norms") => Command::Norms,
        Some("crossed") => Command::Crossed,
        Some("leavitt") => Command::Leavitt,
        other => {
            return err(
                section.line_of("command"),
                1,
                format!("unknown command {other:?}"),
            );
        }
    };
    let word = |key: &str| section.get(key).and_then(SpecValue::as_word).map(str::to_string);
    let p = match section.get("p") {
        None => None,
        Some(v) => {
            let text = match v {
                SpecValue::Int(i) => i.to_string(),
                other => other.as_word().unwrap_or("").to_string(),
            };
            Some(PExponent::parse(&text).map_err(|e| ParseError {
                line: section.line_of("p"),
                col: 1,
                message: e.to_string(),
            })?)
        }
    };
    let zero_entry = match section.get("zero_entry") {
        None => None,
        Some(v) => {
            let list = v.as_usize_list().filter(|l| l.len() == 2).ok_or_else(|| ParseError {
                line: section.line_of("zero_entry"),
                col: 1,
                message: "zero_entry must be [row, col]".into(),
            })?;
            Some((list[0], list[1]))
        }
    };
    let positive_guard = |key: &str| -> Result<Option<u128>, ParseError> {
        match section.get(key) {
            None => Ok(None),
            Some(v) => match v.as_int() {
                Some(i) if i > 0 => Ok(Some(i as u128)),
                _ => err(section.line_of(key), 1, format!("{key} must be a positive integer")),
            },
        }
    };
    Ok(TaskSpec {
        index,
        command,
        groupoid: word("groupoid"),
        algebra: word("algebra"),
        action: word("action"),
        left: word("left"),
        right: word("right"),
        p,
        samples: section.get("samples").and_then(SpecValue::as_usize),
        seed: section.get("seed").and_then(SpecValue::as_int).map(|v| v as u64),
        check: word("check"),
        n: section.get("n").and_then(SpecValue::as_usize),
        k: section.get("k").and_then(SpecValue::as_usize),
        zero_entry,
        max_bisections: positive_guard("max_bisections")?,
        max_nodes: positive_guard("max_nodes")?.map(|v| v as u64),
    })
}

/// Parses and reference-checks a task file.
pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let sections = parse_sections(text)?;
    let mut spec = SpecFile {
        groups: BTreeMap::new(),
        actions: BTreeMap::new(),
        groupoids: BTreeMap::new(),
        algebras: BTreeMap::new(),
        tasks: Vec::new(),
    };
    for section in &sections {
        match section.kind.as_str() {
            "group" => {
                spec.groups.insert(section.name.clone(), load_group(section)?);
            }
            "action" => {
                spec.actions.insert(section.name.clone(), load_action(section)?);
            }
            "groupoid" => {
                spec.groupoids.insert(section.name.clone(), load_groupoid(section)?);
            }
            "algebra" => {
                spec.algebras.insert(section.name.clone(), load_algebra(section)?);
            }
            "task" => spec.tasks.push(load_task(section)?),
            _ => unreachable!("section kinds are checked while splitting"),
        }
    }
    spec.tasks.sort_by_key(|t| t.index);

    // Reference checking.
    let section_line = |kind: &str, name: &str| -> usize {
        sections
            .iter()
            .find(|s| s.kind == kind && s.name == name)
            .map_or(1, |s| s.line)
    };
    for (name, def) in &spec.groups {
        if let GroupDef::Product(l, r) = def {
            for part in [l, r] {
                if !spec.groups.contains_key(part) {
                    return err(
                        section_line("group", name),
                        1,
                        format!("group '{name}' references undefined group '{part}'"),
                    );
                }
            }
        }
    }
    for (name, def) in &spec.actions {
        let group = match def {
            ActionDef::Space { group, .. }
            | ActionDef::Translation { group }
            | ActionDef::Trivial { group, .. }
            | ActionDef::Algebra { group, .. } => Some(group),
            ActionDef::Rotation { .. } => None,
        };
        if let Some(group) = group {
            if !spec.groups.contains_key(group) {
                return err(
                    section_line("action", name),
                    1,
                    format!("action '{name}' references undefined group '{group}'"),
                );
            }
        }
        if let ActionDef::Algebra { algebra, .. } = def {
            if !spec.algebras.contains_key(algebra) {
                return err(
                    section_line("action", name),
                    1,
                    format!("action '{name}' references undefined algebra '{algebra}'"),
                );
            }
        }
    }
    for (name, def) in &spec.groupoids {
        let reference = match def {
            GroupoidDef::Group(g) => Some(("group", g)),
            GroupoidDef::Transformation(a) => Some(("action", a)),
            _ => None,
        };
        if let Some((kind, target)) = reference {
            let found = match kind {
                "group" => spec.groups.contains_key(target),
                _ => spec.actions.contains_key(target),
            };
            if !found {
                return err(
                    section_line("groupoid", name),
                    1,
                    format!("groupoid '{name}' references undefined {kind} '{target}'"),
                );
            }
        }
    }
    for task in &spec.tasks {
        let line = section_line("task", &task.index.to_string());
        let check = |exists: bool, what: &str, target: &str| -> Result<(), ParseError> {
            if exists {
                Ok(())
            } else {
                err(line, 1, format!("task {} references undefined {what} '{target}'", task.index))
            }
        };
        if let Some(g) = &task.groupoid {
            check(spec.groupoids.contains_key(g), "groupoid", g)?;
        }
        if let Some(a) = &task.algebra {
            check(spec.algebras.contains_key(a), "algebra", a)?;
        }
        for key in [&task.action, &task.left, &task.right].into_iter().flatten() {
            check(spec.actions.contains_key(key), "action", key)?;
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spec_parses() {
        let text = "
[groupoid.u3]
kind = units
points = 3

[task.1]
command = core
groupoid = u3
p = 3/2
";
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.tasks.len(), 1);
        assert_eq!(spec.tasks[0].command, Command::Core);
        assert_eq!(spec.tasks[0].p.as_ref().unwrap().to_string(), "3/2");
    }

    #[test]
    fn undefined_reference_is_named() {
        let text = "
[groupoid.g]
kind = group
group = nope

[task.1]
command = validate
groupoid = g
";
        let e = parse_spec(text).unwrap_err();
        assert!(e.message.contains("nope"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_spec("[group.z]\nkind cyclic\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_spec("[task.x]\ncommand = core\n").unwrap_err();
        assert!(e.message.contains("integer"), "{e}");
        let e = parse_spec("key = 1\n").unwrap_err();
        assert!(e.message.contains("before any section"), "{e}");
    }

    #[test]
    fn nested_lists_and_words() {
        let (v, _) = parse_value("[[0, 1] [1 0]]", 1, 1).unwrap();
        assert_eq!(
            v.as_usize_table().unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        let (v, _) = parse_value("3/2", 1, 1).unwrap();
        assert_eq!(v.as_word(), Some("3/2"));
        let (v, _) = parse_value("[\"1/2+1/3i\" \"-1\"]", 1, 1).unwrap();
        assert_eq!(v.as_list().unwrap().len(), 2);
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let e = parse_spec("[group.z]\nkind = cyclic\nkind = cyclic\n").unwrap_err();
        assert!(e.message.contains("duplicate"), "{e}");
    }
}
