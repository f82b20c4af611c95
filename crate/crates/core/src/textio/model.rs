use std::collections::HashMap;
use std::fmt::Write as _;

use crate::kernel::{HoodKind, Model, Neighbourhood, StateSet};

use super::{is_symbol, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Arrow,
    Eq,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    column: usize,
}

fn describe(tok: Option<&Tok>) -> String {
    match tok {
        None => "end of line".into(),
        Some(Tok::Word(w)) => format!("`{w}`"),
        Some(Tok::Arrow) => "`->`".into(),
        Some(Tok::Eq) => "`=`".into(),
        Some(Tok::LBrace) => "`{`".into(),
        Some(Tok::RBrace) => "`}`".into(),
        Some(Tok::LBracket) => "`[`".into(),
        Some(Tok::RBracket) => "`]`".into(),
    }
}

fn lex_line(line_no: usize, text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '=' => Tok::Eq,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Word(chars[start..=i].iter().collect())
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    column,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Spanned { tok, column });
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Section {
    States,
    Atoms,
    Agents,
    Label,
    Rx,
    Rb,
    Rp,
    Ri,
}

impl Section {
    fn from_keyword(word: &str) -> Option<Section> {
        Some(match word {
            "states" => Section::States,
            "atoms" => Section::Atoms,
            "agents" => Section::Agents,
            "label" => Section::Label,
            "RX" => Section::Rx,
            "RB" => Section::Rb,
            "RP" => Section::Rp,
            "RI" => Section::Ri,
            _ => return None,
        })
    }
}

/// Cursor over the tokens of one line.
struct Line {
    no: usize,
    toks: Vec<Spanned>,
    pos: usize,
    end_column: usize,
}

impl Line {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.no, self.column(), message)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error(format!("unexpected {}", describe(self.peek())))
            .expecting(expected)
    }

    fn word(&mut self, expected: &str) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let out = (w.clone(), self.column());
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn punct(&mut self, want: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn words_to_end(&mut self) -> Result<Vec<(String, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.word("identifier")?);
        }
        Ok(out)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }
}

struct Header {
    states: Vec<String>,
    atoms: Vec<String>,
    agents: Vec<String>,
}

struct Builder {
    model: Model,
    states: HashMap<String, usize>,
    labelled: Vec<bool>,
}

impl Builder {
    fn state(&self, line: &Line, (name, column): (String, usize)) -> Result<usize, ParseError> {
        self.states
            .get(&name)
            .copied()
            .ok_or_else(|| ParseError::new(line.no, column, format!("undeclared state `{name}`")))
    }

    fn agent(&self, line: &Line, (name, column): (String, usize)) -> Result<usize, ParseError> {
        self.model
            .agent_index(&name)
            .ok_or_else(|| ParseError::new(line.no, column, format!("undeclared agent `{name}`")))
    }

    fn set_literal(&self, line: &mut Line) -> Result<StateSet, ParseError> {
        line.punct(Tok::LBrace, "`{`")?;
        let mut set = self.model.no_states();
        loop {
            match line.peek() {
                Some(Tok::RBrace) => {
                    line.pos += 1;
                    return Ok(set);
                }
                Some(Tok::Word(_)) => {
                    let w = line.word("state")?;
                    set.insert(self.state(line, w)?);
                }
                _ => return Err(line.unexpected("state or `}`")),
            }
        }
    }
}

fn declare(line: &mut Line, what: &str, symbolic: bool) -> Result<Vec<String>, ParseError> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for (name, column) in line.words_to_end()? {
        if symbolic && !is_symbol(&name) {
            return Err(ParseError::new(
                line.no,
                column,
                format!("`{name}` is not a valid {what} name"),
            ));
        }
        if seen.insert(name.clone(), ()).is_some() {
            return Err(ParseError::new(line.no, column, format!("duplicate {what} `{name}`")));
        }
        out.push(name);
    }
    Ok(out)
}

/// Parses the line-oriented model format.
///
/// ```text
/// states s0 s1
/// atoms p
/// agents a
/// label s0 = [p]
/// label s1 = []
/// RX s0 -> s1
/// RB a s0 -> s1
/// RP a s0 = { s0 s1 } { s1 }
/// RI a s1 = { }
/// ```
///
/// Sections appear in that order; lines within a relation section may come in
/// any order. Omitted `RP`/`RI` lines mean an empty family; repeated lines for
/// the same agent and state accumulate, and duplicate set literals collapse.
pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    let mut header = Header {
        states: Vec::new(),
        atoms: Vec::new(),
        agents: Vec::new(),
    };
    let mut builder: Option<Builder> = None;
    let mut last: Option<Section> = None;
    let mut last_line = 1;

    for (idx, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let no = idx + 1;
        let toks = lex_line(no, raw)?;
        if toks.is_empty() {
            continue;
        }
        last_line = no;
        let mut line = Line {
            no,
            toks,
            pos: 0,
            end_column: raw.chars().count() + 1,
        };
        let (keyword, _) = line.word("section keyword")?;
        let section = Section::from_keyword(&keyword).ok_or_else(|| {
            ParseError::new(no, 1, format!("unknown section `{keyword}`"))
                .expecting("one of states, atoms, agents, label, RX, RB, RP, RI")
        })?;
        line.pos = 1;
        let header_section = section <= Section::Agents;
        match last {
            Some(prev) if section < prev || (header_section && section == prev) => {
                return Err(ParseError::new(no, 1, format!("`{keyword}` line out of order")))
            }
            _ => {}
        }
        let expected_header = match last {
            None => Some(Section::States),
            Some(Section::States) => Some(Section::Atoms),
            Some(Section::Atoms) => Some(Section::Agents),
            _ => None,
        };
        if let Some(want) = expected_header {
            if section != want {
                let name = match want {
                    Section::States => "states",
                    Section::Atoms => "atoms",
                    _ => "agents",
                };
                return Err(ParseError::new(no, 1, format!("missing `{name}` line")).expecting(format!("`{name}`")));
            }
        }
        last = Some(section);

        match section {
            Section::States => {
                header.states = declare(&mut line, "state", false)?;
                if header.states.is_empty() {
                    return Err(line.error("at least one state is required").expecting("state"));
                }
            }
            Section::Atoms => header.atoms = declare(&mut line, "atom", true)?,
            Section::Agents => {
                header.agents = declare(&mut line, "agent", true)?;
                if header.agents.is_empty() {
                    return Err(line.error("at least one agent is required").expecting("agent"));
                }
                let model = Model::new(header.states.clone(), header.atoms.clone(), header.agents.clone())
                    .map_err(|e| ParseError::new(no, 1, e.to_string()))?;
                let states = header.states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
                builder = Some(Builder {
                    labelled: vec![false; model.len()],
                    model,
                    states,
                });
            }
            _ => {
                let b = builder.as_mut().expect("header precedes relations");
                parse_body_line(b, section, &mut line)?;
            }
        }
    }

    let Some(b) = builder else {
        let missing = match last {
            None => "states",
            Some(Section::States) => "atoms",
            _ => "agents",
        };
        return Err(
            ParseError::new(last_line, 1, format!("missing `{missing}` line")).expecting(format!("`{missing}`"))
        );
    };
    if let Some(s) = b.labelled.iter().position(|&l| !l) {
        return Err(ParseError::new(
            last_line,
            1,
            format!("missing label line for state `{}`", b.model.state_name(s)),
        ));
    }
    Ok(b.model)
}

fn parse_body_line(b: &mut Builder, section: Section, line: &mut Line) -> Result<(), ParseError> {
    match section {
        Section::Label => {
            let w = line.word("state")?;
            let state_col = w.1;
            let s = b.state(line, w)?;
            if b.labelled[s] {
                return Err(ParseError::new(
                    line.no,
                    state_col,
                    format!("duplicate label line for `{}`", b.model.state_name(s)),
                ));
            }
            line.punct(Tok::Eq, "`=`")?;
            let bracketed = line.peek() == Some(&Tok::LBracket);
            if bracketed {
                line.pos += 1;
            }
            while let Some(Tok::Word(_)) = line.peek() {
                let (atom, column) = line.word("atom")?;
                let a = b
                    .model
                    .atom_index(&atom)
                    .ok_or_else(|| ParseError::new(line.no, column, format!("undeclared atom `{atom}`")))?;
                b.model.set_label(s, a, true);
            }
            if bracketed {
                line.punct(Tok::RBracket, "atom or `]`")?;
            }
            b.labelled[s] = true;
        }
        Section::Rx => {
            let from = line.word("state")?;
            let from = b.state(line, from)?;
            line.punct(Tok::Arrow, "`->`")?;
            let to = line.word("state")?;
            let to = b.state(line, to)?;
            b.model.temporal_mut().insert(from, to);
        }
        Section::Rb => {
            let agent = line.word("agent")?;
            let agent = b.agent(line, agent)?;
            let from = line.word("state")?;
            let from = b.state(line, from)?;
            line.punct(Tok::Arrow, "`->`")?;
            let to = line.word("state")?;
            let to = b.state(line, to)?;
            b.model.belief_mut(agent).insert(from, to);
        }
        Section::Rp | Section::Ri => {
            let kind = if section == Section::Rp {
                HoodKind::Preference
            } else {
                HoodKind::Intention
            };
            let agent = line.word("agent")?;
            let agent = b.agent(line, agent)?;
            let state = line.word("state")?;
            let state = b.state(line, state)?;
            line.punct(Tok::Eq, "`=`")?;
            while line.peek().is_some() {
                let set = b.set_literal(line)?;
                b.model.add_to_hood(kind, agent, state, set);
            }
        }
        Section::States | Section::Atoms | Section::Agents => unreachable!(),
    }
    line.finish()
}

fn set_literal(m: &Model, set: &StateSet) -> String {
    let mut out = String::from("{");
    for s in set {
        out.push(' ');
        out.push_str(m.state_name(s));
    }
    out.push_str(" }");
    out
}

fn family_line(m: &Model, key: &str, agent: &str, state: usize, hood: &Neighbourhood) -> String {
    let sets: Vec<String> = hood.iter().map(|q| set_literal(m, q)).collect();
    format!("{key} {agent} {} = {}\n", m.state_name(state), sets.join(" "))
}

/// Canonical text: declared state order, relation lines sorted by
/// (agent, source, target), families ordered by their member lists.
pub fn render_model(m: &Model) -> String {
    let mut out = String::new();
    let line = |out: &mut String, key: &str, items: &[String]| {
        out.push_str(key);
        for item in items {
            out.push(' ');
            out.push_str(item);
        }
        out.push('\n');
    };
    line(&mut out, "states", m.states());
    line(&mut out, "atoms", m.atoms());
    let agents: Vec<String> = m.agents().map(|f| f.agent().name().to_string()).collect();
    line(&mut out, "agents", &agents);
    for s in 0..m.len() {
        let atoms: Vec<&str> = m.label(s).collect();
        let _ = writeln!(out, "label {} = [{}]", m.state_name(s), atoms.join(" "));
    }
    for (x, y) in m.temporal().pairs() {
        let _ = writeln!(out, "RX {} -> {}", m.state_name(x), m.state_name(y));
    }
    for frame in m.agents() {
        for (x, y) in frame.belief().pairs() {
            let _ = writeln!(out, "RB {} {} -> {}", frame.agent(), m.state_name(x), m.state_name(y));
        }
    }
    for (key, kind) in [("RP", HoodKind::Preference), ("RI", HoodKind::Intention)] {
        for frame in m.agents() {
            for s in 0..m.len() {
                let hood = frame.hood(kind, s);
                if !hood.is_empty() {
                    out.push_str(&family_line(m, key, frame.agent().name(), s, hood));
                }
            }
        }
    }
    out
}
