//! The `VDW-CERT v1` text format.
//!
//! ```text
//! VDW-CERT v1
//! N 9
//! k 3
//! r 2
//! seed 0
//! params mode=forced eps=1/20
//! attempts 0
//! colors
//! 1 1 2 2 1 1 2 2 1
//! verdict VERIFIED
//! ```
//!
//! Colors are listed by residue `0..N`, whitespace separated, wrapped
//! anywhere. Lines end in LF only.

use std::fmt;

use thiserror::Error;
use vdwforge_core::{Coloring, Group, ENUMERATION_LIMIT};

pub const MAGIC: &str = "VDW-CERT v1";

/// Colors written per line.
const WRAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Unverified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "VERIFIED",
            Verdict::Unverified => "UNVERIFIED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: u64,
    pub k: u64,
    pub r: u32,
    pub seed: Option<u64>,
    /// Free text, must not contain a newline.
    pub params: String,
    pub attempts: u64,
    pub colors: Vec<u32>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

impl Certificate {
    pub fn from_coloring(coloring: &Coloring, k: u64, seed: Option<u64>, params: String, attempts: u64) -> Self {
        Certificate {
            n: coloring.colors().len() as u64,
            k,
            r: coloring.palette(),
            seed,
            params,
            attempts,
            colors: coloring.colors().to_vec(),
            verdict: Verdict::Verified,
        }
    }

    pub fn coloring(&self) -> vdwforge_core::Result<Coloring> {
        Coloring::new(Group::cyclic(self.n)?, self.r, self.colors.clone())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.colors.len() * 3 + 128);
        s.push_str(MAGIC);
        s.push('\n');
        s.push_str(&format!("N {}\nk {}\nr {}\n", self.n, self.k, self.r));
        match self.seed {
            Some(seed) => s.push_str(&format!("seed {seed}\n")),
            None => s.push_str("seed -\n"),
        }
        s.push_str(&format!("params {}\n", self.params.replace(['\n', '\r'], " ")));
        s.push_str(&format!("attempts {}\ncolors\n", self.attempts));
        for chunk in self.colors.chunks(WRAP) {
            let line: Vec<String> = chunk.iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s.push_str(&format!("verdict {}\n", self.verdict));
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let mut next = |what: &str| -> Result<(usize, &str), ParseError> {
            match lines.next() {
                Some((no, l)) if l.contains('\r') => fail(no, "carriage return in line (LF line endings required)"),
                Some((no, l)) => Ok((no, l)),
                None => fail(text.split('\n').count() + 1, format!("unexpected end of file, expected {what}")),
            }
        };

        let (no, magic) = next("header")?;
        if magic != MAGIC {
            return fail(no, format!("expected `{MAGIC}`"));
        }
        let (no, n) = field::<u64>(next("N")?, "N")?;
        if n == 0 || n > ENUMERATION_LIMIT {
            return fail(no, format!("N must lie in 1..={ENUMERATION_LIMIT}"));
        }
        let (_, k) = field::<u64>(next("k")?, "k")?;
        let (no, r) = field::<u32>(next("r")?, "r")?;
        if r == 0 {
            return fail(no, "r must be at least 1");
        }
        let (no, line) = next("seed")?;
        let seed = match value(no, line, "seed")? {
            "-" => None,
            v => Some(v.parse().or_else(|_| fail(no, format!("bad seed `{v}`")))?),
        };
        let (no, line) = next("params")?;
        let params = match line.strip_prefix("params") {
            Some("") => String::new(),
            Some(rest) if rest.starts_with(' ') => rest[1..].to_string(),
            _ => return fail(no, "expected `params <text>`"),
        };
        let (_, attempts) = field::<u64>(next("attempts")?, "attempts")?;
        let (no, line) = next("colors")?;
        if line != "colors" {
            return fail(no, "expected `colors`");
        }

        let mut colors = Vec::with_capacity(n as usize);
        let verdict = loop {
            let (no, line) = next("color values or verdict")?;
            if let Some(rest) = line.strip_prefix("verdict") {
                if (colors.len() as u64) != n {
                    return fail(no, format!("expected {n} colors, found {}", colors.len()));
                }
                break match rest {
                    " VERIFIED" => (no, Verdict::Verified),
                    " UNVERIFIED" => (no, Verdict::Unverified),
                    _ => return fail(no, "expected `verdict VERIFIED` or `verdict UNVERIFIED`"),
                };
            }
            for tok in line.split_whitespace() {
                let c: u32 = tok.parse().or_else(|_| fail(no, format!("bad color `{tok}`")))?;
                if c == 0 || c > r {
                    return fail(no, format!("color {c} outside 1..={r}"));
                }
                if colors.len() as u64 == n {
                    return fail(no, format!("more than {n} colors"));
                }
                colors.push(c);
            }
        };
        let (verdict_line, verdict) = verdict;
        // only the terminating newline may follow
        for (no, rest) in lines {
            if !rest.is_empty() {
                return fail(no, "trailing content after verdict");
            }
        }
        if !text.ends_with('\n') {
            return fail(verdict_line, "missing final newline");
        }
        Ok(Certificate { n, k, r, seed, params, attempts, colors, verdict })
    }
}

fn value<'a>(no: usize, line: &'a str, key: &str) -> Result<&'a str, ParseError> {
    match line.strip_prefix(key).and_then(|rest| rest.strip_prefix(' ')) {
        Some(v) if !v.is_empty() && !v.contains(' ') => Ok(v),
        _ => fail(no, format!("expected `{key} <value>`")),
    }
}

fn field<T: std::str::FromStr>((no, line): (usize, &str), key: &str) -> Result<(usize, T), ParseError> {
    let v = value(no, line, key)?;
    v.parse().map(|x| (no, x)).or_else(|_| fail(no, format!("bad value `{v}` for {key}")))
}
