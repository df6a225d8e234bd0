use serde::{Deserialize, Serialize};

pub const CLASSIFIER: &str = include_str!("../../assets/prompts/classifier.txt");
pub const DESCRIPTION: &str = include_str!("../../assets/prompts/description.txt");
pub const GENERATION: &str = include_str!("../../assets/prompts/generation.txt");
pub const JUDGE: &str = include_str!("../../assets/prompts/judge.txt");

/// Bumped whenever any asset text changes.
pub const PROMPT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PromptKind {
    Classifier,
    Description,
    Generation,
    Judge,
}

impl PromptKind {
    pub const ALL: [PromptKind; 4] =
        [PromptKind::Classifier, PromptKind::Description, PromptKind::Generation, PromptKind::Judge];
}

pub fn build_prompt(kind: PromptKind) -> &'static str {
    match kind {
        PromptKind::Classifier => CLASSIFIER,
        PromptKind::Description => DESCRIPTION,
        PromptKind::Generation => GENERATION,
        PromptKind::Judge => JUDGE,
    }
}
