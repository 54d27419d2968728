//! Message list files: one "SRC DST" pair per line, decimal addresses.
//!
//! `#` starts a comment (whole line or trailing) and blank lines are
//! skipped. The network size is taken from [`LoadOptions::size`] when given;
//! otherwise it is inferred as the smallest power of two strictly greater
//! than the highest address, but never below [`LoadOptions::min_size`].

use std::path::Path;

use crate::conflict::MessageSet;
use crate::error::{Error, Result};
use crate::topology::{Address, NetworkConfig};

/// Parsing parameters. `min_size` exists because some schedulers are only
/// defined from 8 ports up; the inferred size is raised to meet it.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub size: Option<usize>,
    pub min_size: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            size: None,
            min_size: NetworkConfig::MIN_SIZE,
        }
    }
}

impl LoadOptions {
    pub fn with_size(size: Option<usize>) -> Self {
        LoadOptions {
            size,
            ..LoadOptions::default()
        }
    }
}

/// A parsed message list plus the 1-based file line each entry came from.
#[derive(Debug, Clone)]
pub struct MessageFile {
    pub set: MessageSet,
    pub lines: Vec<usize>,
}

fn parse_address(token: &str, line: usize) -> Result<u32> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a decimal address, got {token:?}"),
    })
}

/// Parse message text. See the module comment for the format.
pub fn parse_messages(text: &str, options: &LoadOptions) -> Result<MessageFile> {
    let mut entries: Vec<(u32, u32)> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [src, dst] = tokens[..] else {
            return Err(Error::Parse {
                line,
                message: format!("expected \"SRC DST\", got {} token(s)", tokens.len()),
            });
        };
        entries.push((parse_address(src, line)?, parse_address(dst, line)?));
        lines.push(line);
    }

    let size = match options.size {
        Some(size) => size,
        None => infer_size(&entries, options.min_size),
    };
    let cfg = NetworkConfig::new(size)?;

    for (&(s, d), &line) in entries.iter().zip(&lines) {
        for value in [s, d] {
            if !cfg.contains(Address(value)) {
                return Err(Error::Parse {
                    line,
                    message: format!("address {value} is out of range for {size} ports"),
                });
            }
        }
    }
    let mut first_line = vec![0usize; cfg.size()];
    for (&(s, _), &line) in entries.iter().zip(&lines) {
        if first_line[s as usize] != 0 {
            return Err(Error::DuplicateSourceAt {
                address: s,
                first_line: first_line[s as usize],
                line,
            });
        }
        first_line[s as usize] = line;
    }

    let set = MessageSet::new(
        cfg,
        entries
            .into_iter()
            .map(|(s, d)| (Address(s), Address(d)))
            .collect(),
    )?;
    Ok(MessageFile { set, lines })
}

fn infer_size(entries: &[(u32, u32)], min_size: usize) -> usize {
    let max = entries.iter().map(|&(s, d)| s.max(d)).max().unwrap_or(0);
    fit_size(max, min_size)
}

/// Smallest valid network size that can address `max_address`, at least
/// `min_size`.
pub fn fit_size(max_address: u32, min_size: usize) -> usize {
    let mut size = min_size.max(NetworkConfig::MIN_SIZE);
    while size <= max_address as usize {
        size *= 2;
    }
    size
}

/// Read and parse a message file.
pub fn load_messages(path: &Path, options: &LoadOptions) -> Result<MessageFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_messages(&text, options)
}

/// Render a message set in the file format; parsing the result with the
/// set's explicit size reproduces it.
pub fn render_messages(ms: &MessageSet) -> String {
    let mut out = String::new();
    for &(s, d) in ms.entries() {
        out.push_str(&format!("{s} {d}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWITCH_INSTANCE_FILE: &str = "\
0 4
1 3
2 5
3 6
4 2
5 1
6 0
7 7
";

    #[test]
    fn parses_a_full_instance() {
        let file = parse_messages(SWITCH_INSTANCE_FILE, &LoadOptions::default()).unwrap();
        assert_eq!(file.set.config().size(), 8);
        assert_eq!(file.set.len(), 8);
        assert_eq!(file.set.destination(0), Address(4));
        assert_eq!(file.set.destination(7), Address(7));
        assert!(file.set.is_permutation());
        assert_eq!(file.lines, vec![1, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let text = "# header comment\n\n  0 4  # trailing\n\n#another\n1 3\n";
        let file = parse_messages(text, &LoadOptions::default()).unwrap();
        assert_eq!(file.set.len(), 2);
        assert_eq!(file.lines, vec![3, 6]);
    }

    #[test]
    fn infers_the_smallest_sufficient_size() {
        let file = parse_messages("0 0\n", &LoadOptions::default()).unwrap();
        assert_eq!(file.set.config().size(), 4);

        let raised = parse_messages(
            "0 0\n",
            &LoadOptions {
                size: None,
                min_size: 8,
            },
        )
        .unwrap();
        assert_eq!(raised.set.config().size(), 8);

        // an address equal to a power of two needs the next one up
        let file = parse_messages("0 8\n", &LoadOptions::default()).unwrap();
        assert_eq!(file.set.config().size(), 16);

        let file = parse_messages("0 7\n", &LoadOptions::default()).unwrap();
        assert_eq!(file.set.config().size(), 8);
    }

    #[test]
    fn explicit_size_wins() {
        let file = parse_messages("0 1\n", &LoadOptions::with_size(Some(32))).unwrap();
        assert_eq!(file.set.config().size(), 32);
        assert!(matches!(
            parse_messages("0 1\n", &LoadOptions::with_size(Some(12))),
            Err(Error::InvalidSize(12))
        ));
    }

    #[test]
    fn reports_parse_errors_with_line_numbers() {
        let three = parse_messages("0 1\n2 3 4\n", &LoadOptions::default());
        assert!(matches!(three, Err(Error::Parse { line: 2, .. })));
        let one = parse_messages("5\n", &LoadOptions::default());
        assert!(matches!(one, Err(Error::Parse { line: 1, .. })));
        let junk = parse_messages("\n\nx y\n", &LoadOptions::default());
        assert!(matches!(junk, Err(Error::Parse { line: 3, .. })));
        let negative = parse_messages("0 -1\n", &LoadOptions::default());
        assert!(matches!(negative, Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn reports_out_of_range_addresses_with_line_numbers() {
        let err = parse_messages("0 1\n9 2\n", &LoadOptions::with_size(Some(8)));
        match err {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains('9'), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn reports_duplicate_sources_with_both_lines() {
        let err = parse_messages("0 1\n1 2\n0 3\n", &LoadOptions::default());
        assert!(matches!(
            err,
            Err(Error::DuplicateSourceAt {
                address: 0,
                first_line: 1,
                line: 3
            })
        ));
    }

    #[test]
    fn empty_input_gives_an_empty_set() {
        let file = parse_messages("# nothing\n", &LoadOptions::default()).unwrap();
        assert!(file.set.is_empty());
        assert_eq!(file.set.config().size(), NetworkConfig::MIN_SIZE);
    }

    #[test]
    fn render_round_trips() {
        let file = parse_messages(SWITCH_INSTANCE_FILE, &LoadOptions::default()).unwrap();
        let rendered = render_messages(&file.set);
        let size = Some(file.set.config().size());
        let again = parse_messages(&rendered, &LoadOptions::with_size(size)).unwrap();
        assert_eq!(again.set, file.set);
    }
}
