use std::collections::BTreeSet;

use thiserror::Error;

use super::{Opener, Preamble, ProofTrace, Terminal, TraceArc, TraceLine, TraceStep};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: copy {copy} is resumed but no earlier branch created it")]
    UnknownCopyReference { line: usize, copy: u32 },
}

/// Turns one line of LaTeX source into plain trace text: `{\bf 7.}` becomes
/// `7.`, `$\rightarrow$` becomes `->`, and runs of whitespace collapse.
pub fn strip_latex(line: &str) -> String {
    let s = line
        .replace("$\\rightarrow$", "->")
        .replace("\\rightarrow", "->")
        .replace("\\noindent", " ")
        .replace("{\\bf", " ")
        .replace("\\\\", " ");
    let s: String = s
        .chars()
        .filter(|c| !matches!(c, '{' | '}' | '$'))
        .collect();
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Parses trace text, plain or as LaTeX source. Lines starting with `%` are
/// comments, except the directives `% source X` and `% wlog A->B`.
pub fn parse_trace(text: &str) -> Result<ProofTrace, ParseError> {
    let mut preamble = Preamble::default();
    let mut lines = Vec::new();
    let mut created = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let row = i + 1;
        if let Some(directive) = raw.trim().strip_prefix('%') {
            parse_directive(directive.trim(), row, &mut preamble)?;
            continue;
        }
        let clean = strip_latex(raw);
        if clean.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&clean, row);
        let line = cur.line(lines.len() + 1)?;
        if let Opener::MoveCopy { copy, .. } = line.opener {
            if !created.contains(&copy) {
                return Err(ParseError::UnknownCopyReference { line: row, copy });
            }
        }
        for step in &line.steps {
            if let TraceStep::Branch { copy, .. } = step {
                created.insert(*copy);
            }
        }
        lines.push(line);
    }
    Ok(ProofTrace { preamble, lines })
}

fn parse_directive(d: &str, row: usize, preamble: &mut Preamble) -> Result<(), ParseError> {
    let bad = |message: &str| ParseError::Syntax {
        line: row,
        column: 1,
        message: message.to_owned(),
    };
    if let Some(v) = d.strip_prefix("source ") {
        let v = v.trim();
        if v.is_empty() || !v.chars().all(is_label_char) {
            return Err(bad("malformed source directive"));
        }
        preamble.source = Some(v.to_owned());
    } else if let Some(a) = d.strip_prefix("wlog ") {
        preamble.wlog =
            Some(TraceArc::parse(&strip_latex(a)).ok_or_else(|| bad("malformed wlog directive"))?);
    }
    Ok(())
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    row: usize,
}

impl Cursor {
    fn new(text: &str, row: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            row,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.row,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.chars.get(self.pos + i) == Some(&c))
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.at(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`"))
        }
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        match s.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.error("number out of range")
            }
        }
    }

    fn label(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(is_label_char) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a vertex label");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn arc(&mut self) -> Result<TraceArc, ParseError> {
        let tail = self.label()?;
        self.ws();
        if !self.eat("->") && !self.eat("→") {
            return self.error("expected `->`");
        }
        self.ws();
        Ok(TraceArc::new(tail, self.label()?))
    }

    /// `label ("-" label)+`
    fn chain(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.label()?];
        while self.peek() == Some('-') && !self.at("->") {
            self.pos += 1;
            out.push(self.label()?);
        }
        if out.len() < 2 {
            return self.error("expected at least two labels joined by `-`");
        }
        Ok(out)
    }

    fn line(&mut self, index: usize) -> Result<TraceLine, ParseError> {
        self.ws();
        let mut number = index;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = self.pos;
            let n = self.int()? as usize;
            if !self.eat(".") {
                self.pos = start;
                return self.error("expected a line number like `7.`");
            }
            if n != index {
                self.pos = start;
                return self.error(format!("line number {n} out of sequence, expected {index}"));
            }
            number = n;
        }
        self.ws();
        let opener = if self.eat("MC") {
            if index == 1 {
                return self.error("the first line cannot resume a copy");
            }
            let copy = self.int()?;
            self.ws();
            Opener::MoveCopy {
                copy,
                arc: self.arc()?,
            }
        } else if index > 1 {
            return self.error("expected `MC` opening the line");
        } else {
            Opener::Root
        };
        let mut steps = Vec::new();
        loop {
            self.ws();
            if self.eat("S:") {
                let terminal = Terminal::Shortcut(self.chain()?);
                return self.finish(number, opener, steps, terminal);
            }
            if self.eat("DC:") {
                let terminal = Terminal::DirectedCycle(self.chain()?);
                return self.finish(number, opener, steps, terminal);
            }
            if self.eat("B") {
                let arc = self.arc()?;
                self.ws();
                self.expect("(Copy")?;
                self.ws();
                let copy = self.int()?;
                self.ws();
                self.expect(")")?;
                steps.push(TraceStep::Branch { arc, copy });
            } else if self.eat("O") {
                let mut arcs = vec![self.arc()?];
                self.ws();
                if self.eat("O") {
                    arcs.push(self.arc()?);
                    self.ws();
                }
                self.expect("(C")?;
                let cycle = self.chain()?;
                self.ws();
                self.expect(")")?;
                steps.push(TraceStep::Orient { arcs, cycle });
            } else if self.peek().is_none() {
                return self.error("line ends without `S:` or `DC:`");
            } else {
                return self.error("expected `B`, `O`, `S:` or `DC:`");
            }
        }
    }

    fn finish(
        &mut self,
        number: usize,
        opener: Opener,
        steps: Vec<TraceStep>,
        terminal: Terminal,
    ) -> Result<TraceLine, ParseError> {
        self.ws();
        if self.peek().is_some() {
            return self.error("text after the terminal");
        }
        Ok(TraceLine {
            number,
            opener,
            steps,
            terminal,
        })
    }
}
