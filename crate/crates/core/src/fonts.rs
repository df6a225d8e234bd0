//! Font families and their generic classes.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FontClass {
    Serif,
    SansSerif,
    Monospace,
}

impl FontClass {
    /// CSS generic family name.
    pub fn generic(self) -> &'static str {
        match self {
            FontClass::Serif => "serif",
            FontClass::SansSerif => "sans-serif",
            FontClass::Monospace => "monospace",
        }
    }
}

#[derive(Deserialize)]
struct Defaults {
    font_classes: BTreeMap<String, FontClass>,
}

fn table() -> &'static BTreeMap<String, FontClass> {
    static TABLE: OnceLock<BTreeMap<String, FontClass>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let d: Defaults = serde_json::from_str(crate::DEFAULTS_JSON).expect("bundled defaults parse");
        d.font_classes.into_iter().map(|(k, v)| (k.to_ascii_lowercase(), v)).collect()
    })
}

/// Class of a family name: table lookup first, then keyword rules.
pub fn font_class(family: &str) -> FontClass {
    let name = family.trim().trim_matches(|c| c == '\'' || c == '"').to_ascii_lowercase();
    if let Some(c) = table().get(&name) {
        return *c;
    }
    match name.as_str() {
        "serif" => return FontClass::Serif,
        "monospace" => return FontClass::Monospace,
        _ => {}
    }
    if name.contains("mono") {
        FontClass::Monospace
    } else if name.contains("serif") && !name.contains("sans") {
        FontClass::Serif
    } else {
        FontClass::SansSerif
    }
}

/// `font-family` value for a family, quoted when it contains spaces.
pub fn family_list(family: &str) -> String {
    let generic = font_class(family).generic();
    if family.contains(' ') {
        format!("'{family}', {generic}")
    } else {
        format!("{family}, {generic}")
    }
}
