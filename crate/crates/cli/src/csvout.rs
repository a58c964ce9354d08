//! Deterministic text output: fixed-precision numeric formatting and a
//! small CSV assembler with a mandatory header row and '#'-prefixed footer
//! comments. Rebuilding the same data always yields byte-identical files.

/// Format a float at 12 significant digits: round to that precision first,
/// then print the shortest decimal that reparses to the rounded value, so
/// trailing zeros never appear and reruns are byte-stable. Both zeros
/// collapse to "0" so equal values always print equally.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}")
        .parse()
        .expect("a formatted float always reparses");
    if rounded == 0.0 {
        return "0".to_string();
    }
    format!("{rounded}")
}

/// CSV file under construction: one header, data rows, then footer comments.
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Csv {
            lines: vec![header.to_string()],
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.lines.push(cells.join(","));
    }

    /// Footer comment; the '#' prefix keeps it out of naive CSV readers.
    pub fn comment(&mut self, text: &str) {
        self.lines.push(format!("# {text}"));
    }

    /// Number of data rows added so far.
    pub fn rows(&self) -> usize {
        self.lines
            .iter()
            .skip(1)
            .filter(|l| !l.starts_with('#'))
            .count()
    }

    pub fn finish(self) -> String {
        let mut text = self.lines.join("\n");
        text.push('\n');
        text
    }
}
