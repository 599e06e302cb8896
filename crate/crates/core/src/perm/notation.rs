//! Text notations.
//!
//! One-line: whitespace-separated images of `1..n`, e.g. `2 3 1`.
//! Cycle: `(a b c)(d e)` with the degree given separately; unlisted points are fixed.
//! A document may start with a `degree N` header line; `#` starts a comment.

use super::{Cycle, Permutation};
use crate::error::{Error, Result};

fn malformed(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::MalformedInput {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into `(column, token)` pairs, columns 1-based.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (s + 1, t))
}

fn parse_point(tok: &str, line: usize, column: usize) -> Result<u32> {
    let v: u64 = tok
        .parse()
        .map_err(|_| malformed(line, column, format!("bad token {tok:?}")))?;
    if v == 0 || v > u32::MAX as u64 {
        return Err(malformed(line, column, format!("point {v} out of range")));
    }
    Ok(v as u32)
}

impl Permutation {
    /// Parses one-line notation on a single line.
    pub fn parse_one_line(text: &str) -> Result<Permutation> {
        Self::parse_one_line_at(text, 1)
    }

    fn parse_one_line_at(text: &str, line: usize) -> Result<Permutation> {
        let toks: Vec<_> = tokens(text).collect();
        let n = toks.len();
        let mut images = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for (column, tok) in toks {
            let v = parse_point(tok, line, column)? as usize;
            if v > n {
                return Err(malformed(
                    line,
                    column,
                    format!("point {v} out of range 1..={n}"),
                ));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(malformed(line, column, format!("duplicate point {v}")));
            }
            images.push((v - 1) as u32);
        }
        Ok(Permutation::from_images_unchecked(images))
    }

    /// Parses cycle notation for a permutation of degree `n`.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Permutation> {
        Self::parse_cycles_at(text, n, 1)
    }

    fn parse_cycles_at(text: &str, n: usize, line: usize) -> Result<Permutation> {
        let mut cycles = Vec::new();
        let mut used = vec![false; n];
        let mut current: Option<Vec<u32>> = None;
        let mut number_start: Option<usize> = None;

        let mut flush_number =
            |end: usize, start: &mut Option<usize>, current: &mut Option<Vec<u32>>| -> Result<()> {
                if let Some(s) = start.take() {
                    let tok = &text[s..end];
                    let v = parse_point(tok, line, s + 1)?;
                    if v as usize > n {
                        return Err(malformed(
                            line,
                            s + 1,
                            format!("point {v} out of range 1..={n}"),
                        ));
                    }
                    if std::mem::replace(&mut used[v as usize - 1], true) {
                        return Err(malformed(line, s + 1, format!("duplicate point {v}")));
                    }
                    current.as_mut().expect("inside a cycle").push(v - 1);
                }
                Ok(())
            };

        for (i, ch) in text.char_indices() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(malformed(line, i + 1, "nested '('"));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush_number(i, &mut number_start, &mut current)?;
                    let Some(points) = current.take() else {
                        return Err(malformed(line, i + 1, "unmatched ')'"));
                    };
                    if points.len() > 1 {
                        cycles.push(Cycle { points });
                    }
                }
                c if c.is_ascii_digit() => {
                    if current.is_none() {
                        return Err(malformed(line, i + 1, "point outside parentheses"));
                    }
                    if number_start.is_none() {
                        number_start = Some(i);
                    }
                }
                c if c.is_whitespace() || c == ',' => {
                    flush_number(i, &mut number_start, &mut current)?;
                }
                other => {
                    return Err(malformed(
                        line,
                        i + 1,
                        format!("unexpected character {other:?}"),
                    ))
                }
            }
        }
        if current.is_some() {
            return Err(malformed(line, text.len() + 1, "unterminated cycle"));
        }
        Permutation::from_cycles(n, &cycles)
    }

    /// Parses a document in either notation.
    ///
    /// Blank lines and `#` comments are skipped. An optional `degree N` line supplies the
    /// degree for cycle notation; `degree` overrides it when given.
    pub fn parse_document(text: &str, degree: Option<usize>) -> Result<Permutation> {
        let mut header_degree = None;
        let mut body: Option<(usize, &str)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            if let Some(rest) = content.trim_start().strip_prefix("degree") {
                let v = rest.trim().parse::<usize>().map_err(|_| {
                    malformed(line_no, 1, format!("bad degree header {:?}", raw.trim()))
                })?;
                header_degree = Some(v);
                continue;
            }
            if body.is_some() {
                return Err(malformed(line_no, 1, "more than one permutation line"));
            }
            body = Some((line_no, content));
        }
        let Some((line_no, content)) = body else {
            return Err(malformed(1, 1, "no permutation found"));
        };
        if content.trim_start().starts_with('(') {
            let n = degree.or(header_degree).ok_or_else(|| {
                malformed(line_no, 1, "cycle notation needs a degree (flag or header)")
            })?;
            Self::parse_cycles_at(content, n, line_no)
        } else {
            let p = Self::parse_one_line_at(content, line_no)?;
            if let Some(n) = degree.or(header_degree) {
                if n != p.degree() {
                    return Err(malformed(
                        line_no,
                        1,
                        format!("degree {n} declared but {} images given", p.degree()),
                    ));
                }
            }
            Ok(p)
        }
    }

    /// One-line notation, 1-based.
    pub fn format_one_line(&self) -> String {
        let mut out = String::with_capacity(self.degree() * 4);
        for (k, &b) in self.images.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(&(b + 1).to_string());
        }
        out
    }

    /// Canonical cycle notation; the identity prints as `()`.
    pub fn format_cycles(&self) -> String {
        self.decompose().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_line_definition() {
        let p = Permutation::parse_one_line("2 3 1").unwrap();
        assert_eq!(p.images(), &[1, 2, 0]);
    }

    #[test]
    fn cycle_notation_trace() {
        let p = Permutation::parse_cycles("(1 3)(2 5)", 5).unwrap();
        assert_eq!(p.format_one_line(), "3 5 1 4 2");
    }

    #[test]
    fn duplicate_is_reported_with_position() {
        let err = Permutation::parse_one_line("2 2 1").unwrap_err();
        assert_eq!(
            err,
            Error::MalformedInput {
                line: 1,
                column: 3,
                message: "duplicate point 2".into()
            }
        );
    }

    #[test]
    fn out_of_range_and_bad_tokens() {
        assert!(matches!(
            Permutation::parse_one_line("1 4 2"),
            Err(Error::MalformedInput { column: 3, .. })
        ));
        assert!(Permutation::parse_one_line("1 x 2").is_err());
        assert!(Permutation::parse_cycles("(1 6)", 5).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 5).is_err());
        assert!(Permutation::parse_cycles("(1 2", 5).is_err());
        assert!(Permutation::parse_cycles("1 2)", 5).is_err());
    }

    #[test]
    fn document_with_header_and_comments() {
        let text = "# a comment\ndegree 6\n(1 2 3)(4 5)\n";
        let p = Permutation::parse_document(text, None).unwrap();
        assert_eq!(p.degree(), 6);
        assert_eq!(p.format_cycles(), "(1 2 3)(4 5)");

        let err = Permutation::parse_document("(1 2)", None).unwrap_err();
        assert!(matches!(err, Error::MalformedInput { .. }));

        let err = Permutation::parse_document("\n\n2 2 1\n", None).unwrap_err();
        assert!(matches!(
            err,
            Error::MalformedInput {
                line: 3,
                column: 3,
                ..
            }
        ));
    }

    #[test]
    fn identity_formats() {
        let id = Permutation::identity(3);
        assert_eq!(id.format_cycles(), "()");
        assert_eq!(Permutation::parse_cycles("()", 3).unwrap(), id);
    }

    proptest! {
        #[test]
        fn notations_round_trip(seed in any::<u64>(), n in 1usize..60) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = Permutation::random(n, &mut rng);
            prop_assert_eq!(Permutation::parse_one_line(&p.format_one_line()).unwrap(), p.clone());
            prop_assert_eq!(Permutation::parse_cycles(&p.format_cycles(), n).unwrap(), p);
        }
    }
}
