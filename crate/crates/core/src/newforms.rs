//! Weight 2 newform orbit metadata: fixture loading, validation, caching and lookup.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::invariants::genus_x0_new;

/// CSV header of the fixture format.
pub const CSV_HEADER: &str = "level,label,dim,is_cm,cm_disc,al_signs";

/// One Galois orbit of newforms of weight 2 and trivial character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformOrbit {
    pub level: u64,
    pub label: String,
    pub dim: u64,
    pub is_cm: bool,
    #[serde(default)]
    pub cm_disc: Option<i64>,
    /// Atkin-Lehner signs keyed by the maximal prime powers dividing the level.
    pub al_signs: BTreeMap<u64, i8>,
}

impl NewformOrbit {
    /// Atkin-Lehner sign at the prime power q, if q exactly divides the level.
    pub fn al_sign(&self, q: u64) -> Option<i8> {
        self.al_signs.get(&q).copied()
    }

    /// Checks the schema invariants of a single orbit.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.level == 0 {
            return Err("level must be positive".into());
        }
        if self.dim == 0 {
            return Err("dim must be positive".into());
        }
        let want: BTreeSet<u64> = factorize(self.level).map_err(|e| e.to_string())?.prime_powers().into_iter().collect();
        let have: BTreeSet<u64> = self.al_signs.keys().copied().collect();
        if want != have {
            return Err(format!("al_signs keys {have:?} are not the prime powers {want:?} of {}", self.level));
        }
        if self.al_signs.values().any(|&s| s != 1 && s != -1) {
            return Err("al sign must be + or -".into());
        }
        match (self.is_cm, self.cm_disc) {
            (true, None) => Err("cm orbit without cm_disc".into()),
            (false, Some(_)) => Err("cm_disc given for a non-cm orbit".into()),
            (true, Some(d)) if d >= 0 => Err(format!("cm_disc {d} is not negative")),
            (true, Some(d)) if self.level % d.unsigned_abs() != 0 => {
                Err(format!("|cm_disc| = {} does not divide {}", d.unsigned_abs(), self.level))
            }
            _ => Ok(()),
        }
    }
}

fn format_al_signs(signs: &BTreeMap<u64, i8>) -> String {
    signs
        .iter()
        .map(|(q, s)| format!("{q}:{}", if *s > 0 { '+' } else { '-' }))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_al_signs(s: &str) -> std::result::Result<BTreeMap<u64, i8>, String> {
    let mut out = BTreeMap::new();
    if s.is_empty() {
        return Ok(out);
    }
    for part in s.split(';') {
        let (q, sign) = part.split_once(':').ok_or_else(|| format!("bad al_signs entry {part:?}"))?;
        let q: u64 = q.parse().map_err(|_| format!("bad prime power {q:?}"))?;
        let sign = match sign {
            "+" => 1,
            "-" => -1,
            _ => return Err(format!("bad sign {sign:?}")),
        };
        if out.insert(q, sign).is_some() {
            return Err(format!("duplicate al_signs key {q}"));
        }
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    level: u64,
    label: String,
    dim: u64,
    is_cm: String,
    cm_disc: String,
    al_signs: String,
}

impl CsvRow {
    fn into_orbit(self) -> std::result::Result<NewformOrbit, String> {
        let is_cm = match self.is_cm.as_str() {
            "true" => true,
            "false" => false,
            other => return Err(format!("is_cm must be true or false, got {other:?}")),
        };
        let cm_disc = if self.cm_disc.is_empty() {
            None
        } else {
            Some(self.cm_disc.parse().map_err(|_| format!("bad cm_disc {:?}", self.cm_disc))?)
        };
        Ok(NewformOrbit {
            level: self.level,
            label: self.label,
            dim: self.dim,
            is_cm,
            cm_disc,
            al_signs: parse_al_signs(&self.al_signs)?,
        })
    }
}

/// Fixture file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureFormat {
    Csv,
    Json,
}

impl FixtureFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> FixtureFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => FixtureFormat::Json,
            _ => FixtureFormat::Csv,
        }
    }
}

impl FromStr for FixtureFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FixtureFormat::Csv),
            "json" => Ok(FixtureFormat::Json),
            _ => Err(Error::invalid(format!("unknown fixture format {s:?}"))),
        }
    }
}

/// Per-level result of the load-time dimension check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: u64,
    pub dim_sum: u64,
    pub expected: u64,
}

/// Validated orbit data indexed by level.
#[derive(Clone, Debug, Default)]
pub struct NewformDB {
    orbits: BTreeMap<u64, Vec<NewformOrbit>>,
    coverage: BTreeSet<u64>,
    incomplete: Vec<LevelReport>,
    provenance: String,
}

impl NewformDB {
    /// Builds a db from orbits, marking each level complete iff its dimensions
    /// add up to the dimension of the new subspace.
    pub fn from_orbits(orbits: Vec<NewformOrbit>, provenance: impl Into<String>) -> Result<NewformDB> {
        let mut by_level: BTreeMap<u64, Vec<NewformOrbit>> = BTreeMap::new();
        for o in orbits {
            o.validate().map_err(|reason| Error::Fixture { line: 0, reason: format!("{}: {reason}", o.label) })?;
            by_level.entry(o.level).or_default().push(o);
        }
        let mut coverage = BTreeSet::new();
        let mut incomplete = Vec::new();
        for (&level, list) in &by_level {
            let dim_sum = list.iter().map(|o| o.dim).sum();
            let expected = genus_x0_new(level)?;
            if dim_sum == expected {
                coverage.insert(level);
            } else {
                incomplete.push(LevelReport { level, dim_sum, expected });
            }
        }
        Ok(NewformDB {
            orbits: by_level,
            coverage,
            incomplete,
            provenance: provenance.into(),
        })
    }

    pub fn empty() -> NewformDB {
        NewformDB::default()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Levels whose dimension sum was verified.
    pub fn coverage(&self) -> &BTreeSet<u64> {
        &self.coverage
    }

    /// Levels present in the data whose dimension sum is wrong.
    pub fn incomplete_levels(&self) -> &[LevelReport] {
        &self.incomplete
    }

    /// Whether the orbit list at this level is known to be complete. Levels
    /// with no new forms at all are complete without data.
    pub fn is_complete(&self, level: u64) -> bool {
        self.coverage.contains(&level) || (!self.orbits.contains_key(&level) && genus_x0_new(level).is_ok_and(|g| g == 0))
    }

    /// Orbits at a level together with the completeness flag.
    pub fn query(&self, level: u64) -> (&[NewformOrbit], bool) {
        let list = self.orbits.get(&level).map(Vec::as_slice).unwrap_or(&[]);
        (list, self.is_complete(level))
    }

    pub fn orbits(&self) -> impl Iterator<Item = &NewformOrbit> {
        self.orbits.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.orbits.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds orbits for levels not yet present.
    pub fn merge(&mut self, other: NewformDB) {
        for (level, list) in other.orbits {
            if self.orbits.contains_key(&level) {
                continue;
            }
            if other.coverage.contains(&level) {
                self.coverage.insert(level);
            }
            self.orbits.insert(level, list);
        }
        self.incomplete.extend(other.incomplete.into_iter().filter(|r| !self.coverage.contains(&r.level)));
    }

    /// Dimension of the CM part of J_0(level)^new, if the level is complete.
    pub fn cm_new_dimension(&self, level: u64) -> Option<u64> {
        let (list, complete) = self.query(level);
        complete.then(|| list.iter().filter(|o| o.is_cm).map(|o| o.dim).sum())
    }

    /// Canonical CSV dump, rows sorted by level then label.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for o in self.orbits() {
            let disc = o.cm_disc.map(|d| d.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                o.level,
                o.label,
                o.dim,
                o.is_cm,
                disc,
                format_al_signs(&o.al_signs)
            ));
        }
        out
    }
}

/// Parses CSV fixture text. Line numbers in errors are 1-based and count the header.
pub fn parse_csv(text: &str) -> Result<Vec<NewformOrbit>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Fixture { line: 1, reason: e.to_string() })?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(Error::Fixture {
            line: 1,
            reason: format!("header must be {CSV_HEADER}"),
        });
    }
    let mut out = Vec::new();
    for row in reader.deserialize::<CsvRow>() {
        let row = row.map_err(|e| Error::Fixture {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = out.len() + 2;
        let orbit = row.into_orbit().map_err(|reason| Error::Fixture { line, reason })?;
        orbit.validate().map_err(|reason| Error::Fixture { line, reason })?;
        out.push(orbit);
    }
    Ok(out)
}

/// Parses JSON fixture text, an array of orbit records.
pub fn parse_json(text: &str) -> Result<Vec<NewformOrbit>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let orbits: Vec<NewformOrbit> = serde_json::from_str(text)?;
    for (i, o) in orbits.iter().enumerate() {
        o.validate().map_err(|reason| Error::Fixture { line: i + 1, reason })?;
    }
    Ok(orbits)
}

/// Loads and validates a fixture file.
pub fn load_fixtures(path: &Path, format: FixtureFormat) -> Result<NewformDB> {
    let text = fs::read_to_string(path)?;
    let orbits = match format {
        FixtureFormat::Csv => parse_csv(&text)?,
        FixtureFormat::Json => parse_json(&text)?,
    };
    NewformDB::from_orbits(orbits, path.display().to_string())
}

/// Where and how to fetch remote data.
#[derive(Clone, Debug)]
pub struct RemoteConfig {
    /// URL template; `{level}` is replaced by the level, otherwise `/<level>` is appended.
    pub endpoint: String,
    pub timeout: Duration,
    pub offline: bool,
    pub cache_dir: PathBuf,
    pub attempts: u32,
    pub backoff: Duration,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        RemoteConfig {
            endpoint: "http://localhost:8080/newforms/{level}".into(),
            timeout: Duration::from_secs(30),
            offline: false,
            cache_dir: PathBuf::from("cache"),
            attempts: 3,
            backoff: Duration::from_millis(250),
        }
    }
}

impl RemoteConfig {
    /// Defaults overridden by CARTAN_ENDPOINT, CARTAN_TIMEOUT (seconds),
    /// CARTAN_OFFLINE and CARTAN_CACHE_DIR.
    pub fn from_env() -> RemoteConfig {
        let mut c = RemoteConfig::default();
        if let Ok(v) = std::env::var("CARTAN_ENDPOINT") {
            c.endpoint = v;
        }
        if let Some(t) = std::env::var("CARTAN_TIMEOUT").ok().and_then(|v| v.parse().ok()) {
            c.timeout = Duration::from_secs(t);
        }
        if let Ok(v) = std::env::var("CARTAN_OFFLINE") {
            c.offline = matches!(v.as_str(), "1" | "true" | "yes");
        }
        if let Ok(v) = std::env::var("CARTAN_CACHE_DIR") {
            c.cache_dir = PathBuf::from(v);
        }
        c
    }

    fn url(&self, level: u64) -> String {
        if self.endpoint.contains("{level}") {
            self.endpoint.replace("{level}", &level.to_string())
        } else {
            format!("{}/{level}", self.endpoint.trim_end_matches('/'))
        }
    }

    fn cache_path(&self, level: u64) -> PathBuf {
        self.cache_dir.join("newforms").join(format!("{level}.json"))
    }
}

/// Fetches per-level records over HTTP with an on-disk cache.
pub struct Fetcher {
    config: RemoteConfig,
    calls: AtomicU64,
}

impl Fetcher {
    pub fn new(config: RemoteConfig) -> Fetcher {
        Fetcher { config, calls: AtomicU64::new(0) }
    }

    /// Number of HTTP requests issued so far.
    pub fn network_calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Records for each level, from the cache when present.
    pub fn fetch(&self, levels: &[u64]) -> Result<Vec<NewformOrbit>> {
        let mut out = Vec::new();
        for &level in levels {
            out.extend(self.fetch_level(level)?);
        }
        Ok(out)
    }

    /// Same as [`Fetcher::fetch`], validated into a db.
    pub fn fetch_db(&self, levels: &[u64]) -> Result<NewformDB> {
        NewformDB::from_orbits(self.fetch(levels)?, format!("remote {}", self.config.endpoint))
    }

    fn fetch_level(&self, level: u64) -> Result<Vec<NewformOrbit>> {
        let path = self.config.cache_path(level);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(orbits) = parse_payload(level, &text) {
                return Ok(orbits);
            }
        }
        if self.config.offline {
            return Err(Error::Network(format!("offline and level {level} is not cached")));
        }
        let body = self.get_with_retry(&self.config.url(level))?;
        let orbits = parse_payload(level, &body)?;
        write_cache(&path, &serde_json::to_string_pretty(&orbits)?)?;
        Ok(orbits)
    }

    fn get_with_retry(&self, url: &str) -> Result<String> {
        let client = reqwest::blocking::Client::builder()
            .timeout(self.config.timeout)
            .build()
            .map_err(|e| Error::Network(e.to_string()))?;
        let mut delay = self.config.backoff;
        let mut last = String::new();
        for attempt in 0..self.config.attempts.max(1) {
            if attempt > 0 {
                std::thread::sleep(delay);
                delay *= 2;
            }
            self.calls.fetch_add(1, Ordering::Relaxed);
            match client.get(url).send().and_then(|r| r.error_for_status()) {
                Ok(resp) => match resp.text() {
                    Ok(body) => return Ok(body),
                    Err(e) => last = e.to_string(),
                },
                Err(e) => last = e.to_string(),
            }
        }
        Err(Error::Network(format!("{url}: {last}")))
    }
}

fn parse_payload(level: u64, text: &str) -> Result<Vec<NewformOrbit>> {
    let orbits = parse_json(text)?;
    if let Some(o) = orbits.iter().find(|o| o.level != level) {
        return Err(Error::Network(format!("payload for level {level} contains level {}", o.level)));
    }
    Ok(orbits)
}

fn write_cache(path: &Path, body: &str) -> Result<()> {
    let dir = path.parent().expect("cache path has a parent");
    fs::create_dir_all(dir)?;
    let lock = OpenOptions::new().create(true).truncate(false).write(true).open(dir.join(".lock"))?;
    lock.lock()?;
    let tmp = path.with_extension("json.tmp");
    let mut f = File::create(&tmp)?;
    f.write_all(body.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    lock.unlock()?;
    Ok(())
}
