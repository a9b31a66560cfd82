//! Plain-text, markdown and CSV tables.

use clap::ValueEnum;
use powerkit_core::rational::{format_decimal, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Markdown,
    /// Machine-readable document with full precision (fit only).
    Json,
}

/// Output format and decimal places; values are rounded half-even.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    pub precision: u32,
}

pub const MAX_PRECISION: u32 = 12;

impl RenderSpec {
    pub fn rational(&self, x: &Rational) -> String {
        format_decimal(x, self.precision)
    }

    /// Correctly rounded decimal of the binary value, ties to even.
    pub fn float(&self, x: f64) -> String {
        if x.is_nan() {
            return String::from(".");
        }
        let s = format!("{:.*}", self.precision as usize, x);
        // "-0.000" carries no information beyond "0.000"
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            title: None,
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text | Format::Json => self.text(),
            Format::Markdown => self.markdown(),
            Format::Csv => self.csv(),
        }
    }

    fn widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (j, cell) in row.iter().enumerate() {
                if j < w.len() {
                    w[j] = w[j].max(cell.chars().count());
                }
            }
        }
        w
    }

    fn text(&self) -> String {
        let w = self.widths();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(j, c)| if j == 0 { format!("{c:<0$}", w[j]) } else { format!("{c:>0$}", w[j]) })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(t);
            out.push('\n');
        }
        out.push_str(&line(&self.headers));
        out.push('\n');
        let total: usize = w.iter().sum::<usize>() + 2 * w.len().saturating_sub(1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(&format!("**{t}**\n\n"));
        }
        out.push_str(&format!("| {} |\n", self.headers.join(" | ")));
        let align: Vec<&str> = (0..self.headers.len()).map(|j| if j == 0 { ":---" } else { "---:" }).collect();
        out.push_str(&format!("| {} |\n", align.join(" | ")));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 cells")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use powerkit_core::rational::ratio;

    #[test]
    fn rounding_is_half_even() {
        let spec = RenderSpec {
            format: Format::Text,
            precision: 2,
        };
        assert_eq!(spec.float(0.125), "0.12");
        assert_eq!(spec.float(0.375), "0.38");
        assert_eq!(spec.float(-0.0001), "0.00");
        assert_eq!(spec.rational(&ratio(1, 8)), "0.12");
        assert_eq!(spec.rational(&ratio(3, 8)), "0.38");
    }

    #[test]
    fn formats() {
        let mut t = Table::new(["Member", "SSI"]);
        t.push(vec!["France".into(), "0.233".into()]);
        t.push(vec!["Luxembourg, Gr.".into(), "0.000".into()]);
        assert_eq!(t.render(Format::Csv), "Member,SSI\nFrance,0.233\n\"Luxembourg, Gr.\",0.000\n");
        assert!(t.render(Format::Markdown).contains("| France | 0.233 |"));
        let text = t.render(Format::Text);
        assert!(text.lines().nth(2).unwrap().starts_with("France           0.233"));
    }
}
