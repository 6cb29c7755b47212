use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

/// Timestamp layout used by the public Stack Exchange dumps, e.g. `2008-07-31T21:42:52.667`.
pub const DUMP_DATE_FORMAT: &str = "%Y-%m-%dT%H:%M:%S%.3f";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PostType {
    Question,
    Answer,
}

impl PostType {
    /// Maps a dump `PostTypeId` to a post type. Only questions (1) and answers (2) are modelled.
    pub fn from_type_id(id: u32) -> Option<Self> {
        match id {
            1 => Some(PostType::Question),
            2 => Some(PostType::Answer),
            _ => None,
        }
    }

    pub fn type_id(self) -> u32 {
        match self {
            PostType::Question => 1,
            PostType::Answer => 2,
        }
    }
}

/// One row of the Posts dump.
///
/// `body` holds HTML markup with the XML attribute escaping already removed, so
/// HTML entities such as `&lt;` inside it are still HTML-encoded exactly once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub id: u64,
    pub post_type: PostType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub body: String,
    #[serde(default)]
    pub tags: Vec<String>,
    pub score: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepted_answer_id: Option<u64>,
    #[serde(with = "dump_date")]
    pub creation_date: NaiveDateTime,
}

impl Post {
    pub fn is_question(&self) -> bool {
        self.post_type == PostType::Question
    }

    pub fn is_answer(&self) -> bool {
        self.post_type == PostType::Answer
    }

    pub fn title_or_empty(&self) -> &str {
        self.title.as_deref().unwrap_or("")
    }

    /// Question size as stored in the dump: raw body characters, markup included.
    pub fn body_chars(&self) -> usize {
        self.body.chars().count()
    }
}

/// Splits a dump `Tags` value such as `<swt><java>` into `["swt", "java"]`.
pub fn parse_tags(raw: &str) -> Vec<String> {
    raw.split(['<', '>'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn format_tags(tags: &[String]) -> String {
    tags.iter().map(|t| format!("<{t}>")).collect()
}

pub fn parse_dump_date(raw: &str) -> Option<NaiveDateTime> {
    NaiveDateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S%.f").ok()
}

pub fn format_dump_date(date: &NaiveDateTime) -> String {
    date.format(DUMP_DATE_FORMAT).to_string()
}

pub(crate) mod dump_date {
    use chrono::NaiveDateTime;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(date: &NaiveDateTime, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_dump_date(date))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<NaiveDateTime, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_dump_date(&raw).ok_or_else(|| D::Error::custom(format!("bad timestamp {raw:?}")))
    }
}
