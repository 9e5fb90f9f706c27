use serde::Serialize;

use crate::Format;

/// Prints `record` as pretty JSON, or as `text` when the text format is asked for.
pub fn emit<T: Serialize>(record: &T, fmt: Format, text: impl FnOnce(&T) -> String) -> anyhow::Result<()> {
    match fmt {
        Format::Json => println!("{}", serde_json::to_string_pretty(record)?),
        Format::Text => print!("{}", text(record)),
    }
    Ok(())
}

pub fn edges_text<'a>(edges: impl IntoIterator<Item = &'a [usize; 2]>) -> String {
    edges.into_iter().map(|[a, b]| format!("{a}-{b}")).collect::<Vec<_>>().join(" ")
}
