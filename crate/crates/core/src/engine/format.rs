use std::fmt::Write;
use std::str::FromStr;

use super::RankedList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    /// `rank TAB doc TAB path TAB score`
    Tsv,
    /// A `<topic>` block of an INEX-style submission.
    Inex,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(OutputFormat::Table),
            "tsv" => Ok(OutputFormat::Tsv),
            "inex" => Ok(OutputFormat::Inex),
            _ => Err(format!("unknown format {s:?} (expected table, tsv or inex)")),
        }
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render(list: &RankedList, format: OutputFormat, topic_id: &str) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Table => {
            let doc_w = list.iter().map(|h| h.locator.len()).max().unwrap_or(0).max(3);
            let path_w = list.iter().map(|h| h.path.len()).max().unwrap_or(0).max(4);
            let _ = writeln!(out, "{:>5}  {:<doc_w$}  {:<path_w$}  {:>8}", "rank", "doc", "path", "score");
            for h in list.iter() {
                let _ = writeln!(
                    out,
                    "{:>5}  {:<doc_w$}  {:<path_w$}  {:>8.6}",
                    h.rank, h.locator, h.path, h.score
                );
            }
        }
        OutputFormat::Tsv => {
            for h in list.iter() {
                let _ = writeln!(out, "{}\t{}\t{}\t{}", h.rank, h.locator, h.path, h.score);
            }
        }
        OutputFormat::Inex => {
            let _ = writeln!(out, "<topic topic-id=\"{}\">", xml_escape(topic_id));
            for h in list.iter() {
                let _ = writeln!(
                    out,
                    "  <result><file>{}</file><path>{}</path><rank>{}</rank><rsv>{}</rsv></result>",
                    xml_escape(&h.locator),
                    xml_escape(&h.path),
                    h.rank,
                    h.score
                );
            }
            out.push_str("</topic>\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::RankedHit;

    fn list() -> RankedList {
        RankedList {
            hits: vec![
                RankedHit {
                    rank: 1,
                    doc_id: 0,
                    node_id: 3,
                    locator: "co/2001/r1234.xml".into(),
                    path: "/article[1]/bdy[1]/sec[2]".into(),
                    score: 0.875,
                },
                RankedHit {
                    rank: 2,
                    doc_id: 1,
                    node_id: 0,
                    locator: "a&b.xml".into(),
                    path: "/article[1]".into(),
                    score: 0.5,
                },
            ],
        }
    }

    #[test]
    fn tsv_lines() {
        assert_eq!(
            render(&list(), OutputFormat::Tsv, "1"),
            "1\tco/2001/r1234.xml\t/article[1]/bdy[1]/sec[2]\t0.875\n2\ta&b.xml\t/article[1]\t0.5\n"
        );
    }

    #[test]
    fn inex_block_escapes() {
        let s = render(&list(), OutputFormat::Inex, "280");
        assert!(s.starts_with("<topic topic-id=\"280\">\n"));
        assert!(s.contains("<file>a&amp;b.xml</file>"));
        assert!(s.ends_with("</topic>\n"));
    }

    #[test]
    fn table_has_header_and_rows() {
        let s = render(&list(), OutputFormat::Table, "");
        assert_eq!(s.lines().count(), 3);
        assert!(s.lines().next().unwrap().contains("rank"));
        assert!(s.contains("0.875000"));
    }
}
