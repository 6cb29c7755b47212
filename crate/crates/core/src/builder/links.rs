//! Dead-link detection behind a pluggable checker.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{LazyLock, Mutex};

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::textprep::{pieces, strip_code, Piece};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkStatus {
    pub url: String,
    pub alive: bool,
    pub status: Option<u16>,
    pub checked_at: DateTime<Utc>,
}

impl LinkStatus {
    /// A response status; anything from 400 up counts as dead.
    pub fn from_status(url: &str, status: u16) -> Self {
        Self { url: url.to_string(), alive: status < 400, status: Some(status), checked_at: Utc::now() }
    }

    /// The check could not complete (DNS, connection, timeout, redirect limit).
    pub fn unreachable(url: &str) -> Self {
        Self { url: url.to_string(), alive: false, status: None, checked_at: Utc::now() }
    }
}

pub trait LinkChecker: Sync {
    fn check(&self, url: &str) -> LinkStatus;
}

impl<C: LinkChecker + ?Sized> LinkChecker for &C {
    fn check(&self, url: &str) -> LinkStatus {
        (**self).check(url)
    }
}

impl<C: LinkChecker + ?Sized> LinkChecker for Box<C> {
    fn check(&self, url: &str) -> LinkStatus {
        (**self).check(url)
    }
}

/// Offline checker answering from a URL → status map.
///
/// A `null` status in the manifest means the URL could not be reached. URLs
/// missing from the manifest are reported as unreachable unless
/// [`assume_unknown_alive`](Self::assume_unknown_alive) is set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ManifestChecker {
    statuses: BTreeMap<String, Option<u16>>,
    unknown_alive: bool,
}

impl ManifestChecker {
    pub fn new(statuses: BTreeMap<String, Option<u16>>) -> Self {
        Self { statuses, unknown_alive: false }
    }

    pub fn assume_unknown_alive(mut self, yes: bool) -> Self {
        self.unknown_alive = yes;
        self
    }

    pub fn from_json(json: &str) -> Result<Self, serde_json::Error> {
        Ok(Self::new(serde_json::from_str(json)?))
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let raw = fs::read_to_string(path)?;
        Self::from_json(&raw).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.statuses).expect("string map serializes")
    }

    pub fn statuses(&self) -> &BTreeMap<String, Option<u16>> {
        &self.statuses
    }
}

impl LinkChecker for ManifestChecker {
    fn check(&self, url: &str) -> LinkStatus {
        match self.statuses.get(url) {
            Some(Some(status)) => LinkStatus::from_status(url, *status),
            Some(None) => LinkStatus::unreachable(url),
            None if self.unknown_alive => LinkStatus { status: None, alive: true, ..LinkStatus::unreachable(url) },
            None => LinkStatus::unreachable(url),
        }
    }
}

/// Memoizes another checker so each URL is checked at most once per run.
pub struct CachedChecker<C> {
    inner: C,
    cache: Mutex<HashMap<String, LinkStatus>>,
}

impl<C: LinkChecker> CachedChecker<C> {
    pub fn new(inner: C) -> Self {
        Self { inner, cache: Mutex::new(HashMap::new()) }
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("link cache poisoned").len()
    }
}

impl<C: LinkChecker> LinkChecker for CachedChecker<C> {
    fn check(&self, url: &str) -> LinkStatus {
        if let Some(hit) = self.cache.lock().expect("link cache poisoned").get(url) {
            return hit.clone();
        }
        let status = self.inner.check(url);
        self.cache.lock().expect("link cache poisoned").entry(url.to_string()).or_insert(status).clone()
    }
}

#[cfg(feature = "live-links")]
mod live {
    use std::time::Duration;

    use reqwest::blocking::Client;
    use reqwest::redirect::Policy;

    use super::{LinkChecker, LinkStatus};

    /// Live HTTP checker: HEAD first, GET when HEAD fails or is refused.
    pub struct HttpChecker {
        client: Client,
    }

    impl HttpChecker {
        pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
        pub const MAX_REDIRECTS: usize = 3;

        pub fn new() -> reqwest::Result<Self> {
            Self::with_timeout(Self::DEFAULT_TIMEOUT)
        }

        pub fn with_timeout(timeout: Duration) -> reqwest::Result<Self> {
            let client = Client::builder()
                .timeout(timeout)
                .redirect(Policy::limited(Self::MAX_REDIRECTS))
                .user_agent(concat!("crowd-cookbook/", env!("CARGO_PKG_VERSION")))
                .build()?;
            Ok(Self { client })
        }
    }

    impl LinkChecker for HttpChecker {
        fn check(&self, url: &str) -> LinkStatus {
            let head = self.client.head(url).send();
            match head {
                Ok(resp) if resp.status().as_u16() < 400 => LinkStatus::from_status(url, resp.status().as_u16()),
                _ => match self.client.get(url).send() {
                    Ok(resp) => LinkStatus::from_status(url, resp.status().as_u16()),
                    Err(_) => LinkStatus::unreachable(url),
                },
            }
        }
    }
}

#[cfg(feature = "live-links")]
pub use live::HttpChecker;

/// Checks each URL in order.
pub fn check_links(urls: &[String], checker: &dyn LinkChecker) -> Vec<LinkStatus> {
    urls.iter().map(|u| checker.check(u)).collect()
}

/// Checks URLs with at most `max_in_flight` concurrent checks. Results follow input order.
pub fn check_links_parallel(urls: &[String], checker: &dyn LinkChecker, max_in_flight: usize) -> Vec<LinkStatus> {
    let workers = max_in_flight.clamp(1, urls.len().max(1));
    if workers == 1 {
        return check_links(urls, checker);
    }
    let next = AtomicUsize::new(0);
    let mut results: Vec<(usize, LinkStatus)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(url) = urls.get(i) else { break };
                        done.push((i, checker.check(url)));
                    }
                    done
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("link worker panicked")).collect()
    });
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, s)| s).collect()
}

static BARE_URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"https?://[^\s<>"'\[\]{}|\\^`]+"#).expect("valid URL pattern"));

fn is_http(url: &str) -> bool {
    let lower = url.get(..8).unwrap_or(url).to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://")
}

/// Absolute http(s) links in a post body: anchor targets and bare URLs in the
/// text, in document order, without duplicates. Code blocks are skipped.
pub fn extract_links(body: &str) -> Vec<String> {
    let text = strip_code(body).text;
    let mut found: Vec<String> = Vec::new();
    let mut push = |url: String| {
        if !found.contains(&url) {
            found.push(url);
        }
    };
    for piece in pieces(&text) {
        match piece {
            Piece::Tag(tag) if tag.name == "a" && !tag.closing => {
                if let Some(href) = tag.attr(&text, "href") {
                    let href = html_escape::decode_html_entities(href.trim()).into_owned();
                    if is_http(&href) {
                        push(href);
                    }
                }
            }
            Piece::Text { start, end } => {
                let decoded = html_escape::decode_html_entities(&text[start..end]);
                for m in BARE_URL.find_iter(&decoded) {
                    let url = m.as_str().trim_end_matches(['.', ',', ';', ':', '!', '?', ')']);
                    push(url.to_string());
                }
            }
            _ => {}
        }
    }
    found
}
