//! On-disk caches for the census, the action tables and the components of one degree.
//!
//! Every file starts with a header line
//! `# origami-cache version=1 kind=<census|action|components> degree=<d> sha256=<hex>`
//! where the checksum covers the body. A file with the wrong version, degree or checksum
//! is treated as stale and recomputed.

use std::fs;
use std::io::{ErrorKind, Write as _};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::action::ClassAction;
use crate::classifier::{census_with, Census, CensusOptions};
use crate::curve::{components, curve_genus, CurveComponent, Valency};
use crate::error::{Error, Result};
use crate::origami::Origami;

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "ORIGAMI_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Census,
    Action,
    Components,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Census => "census",
            Kind::Action => "action",
            Kind::Components => "components",
        }
    }
}

/// Result of reading a cache file.
#[derive(Debug)]
pub enum Loaded<T> {
    Missing,
    /// Present but unusable; the reason is meant for a log line.
    Stale(String),
    Ok(T),
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn checksum(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn header(kind: Kind, degree: usize, body: &str) -> String {
    format!(
        "# origami-cache version={FORMAT_VERSION} kind={} degree={degree} sha256={}\n",
        kind.name(),
        checksum(body)
    )
}

/// Splits `k=v; k=v; ...` into pairs, in order.
fn fields(line: &str) -> Vec<(&str, &str)> {
    line.split("; ")
        .filter_map(|f| f.split_once('='))
        .map(|(k, v)| (k.trim(), v.trim()))
        .collect()
}

fn field<'a>(fs: &[(&'a str, &'a str)], key: &str) -> Option<&'a str> {
    fs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

pub fn census_text(census: &Census) -> String {
    let d = census.degree();
    let mut body = String::new();
    for c in census.classes() {
        body += &format!(
            "d={d}; {}; size={}; abelian={}\n",
            c.rep,
            c.size,
            u8::from(c.abelian)
        );
    }
    header(Kind::Census, d, &body) + &body
}

pub fn action_text(action: &ClassAction) -> String {
    let mut body = String::new();
    for (id, [t, s, m]) in action.rows().into_iter().enumerate() {
        body += &format!("{id} {t} {s} {m}\n");
    }
    header(Kind::Action, action.degree(), &body) + &body
}

pub fn component_record(c: &CurveComponent) -> String {
    let members: Vec<String> = c.members.iter().map(ToString::to_string).collect();
    format!(
        "comp={}; degree={}; abelian={}; index={}; valency={}; genus={}; members=[{}]",
        c.id,
        c.degree,
        u8::from(c.abelian),
        c.index(),
        c.valency,
        c.genus,
        members.join(",")
    )
}

pub fn components_text(degree: usize, comps: &[CurveComponent]) -> String {
    let body: String = comps.iter().map(|c| component_record(c) + "\n").collect();
    header(Kind::Components, degree, &body) + &body
}

/// Checks the header and returns the body, or the reason it is stale.
fn check_header(text: &str, kind: Kind, degree: usize) -> std::result::Result<&str, String> {
    let (head, body) = text.split_once('\n').ok_or("empty file")?;
    let head = head.strip_prefix("# origami-cache ").ok_or("missing header")?;
    let mut sum = None;
    for part in head.split(' ') {
        match part.split_once('=') {
            Some(("version", v)) if v != FORMAT_VERSION.to_string() => {
                return Err(format!("format version {v}, expected {FORMAT_VERSION}"))
            }
            Some(("kind", k)) if k != kind.name() => return Err(format!("kind {k}, expected {}", kind.name())),
            Some(("degree", v)) if v != degree.to_string() => return Err(format!("degree {v}, expected {degree}")),
            Some(("sha256", v)) => sum = Some(v),
            _ => {}
        }
    }
    match sum {
        Some(s) if s == checksum(body) => Ok(body),
        Some(_) => Err("checksum mismatch".into()),
        None => Err("no checksum".into()),
    }
}

fn parse_bool(v: Option<&str>) -> Option<bool> {
    match v? {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

pub fn parse_census(text: &str, degree: usize) -> Result<Loaded<Census>> {
    let body = match check_header(text, Kind::Census, degree) {
        Ok(b) => b,
        Err(why) => return Ok(Loaded::Stale(why)),
    };
    let mut reps = Vec::new();
    let mut flags = Vec::new();
    for (n, line) in body.lines().enumerate() {
        let bad = |reason: &str| Error::Invariant(format!("census record {n}: {reason}"));
        let fs = fields(line);
        if field(&fs, "d") != Some(&degree.to_string()) {
            return Err(bad("wrong degree"));
        }
        let (Some(x), Some(y), Some(eps)) = (field(&fs, "x"), field(&fs, "y"), field(&fs, "eps")) else {
            return Err(bad("missing x, y or eps"));
        };
        let o: Origami = format!("x={x}; y={y}; eps={eps}").parse()?;
        let size = field(&fs, "size").and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad size"))?;
        flags.push(parse_bool(field(&fs, "abelian")).ok_or_else(|| bad("bad abelian flag"))?);
        reps.push((o, Some(size)));
    }
    let census = Census::from_representatives(degree, reps)?;
    if census.classes().iter().zip(&flags).any(|(c, &f)| c.abelian != f) {
        return Err(Error::Invariant("recorded abelian flag disagrees with the cover".into()));
    }
    Ok(Loaded::Ok(census))
}

pub fn parse_action(text: &str, census: &Census) -> Result<Loaded<ClassAction>> {
    let body = match check_header(text, Kind::Action, census.degree()) {
        Ok(b) => b,
        Err(why) => return Ok(Loaded::Stale(why)),
    };
    let mut rows = Vec::new();
    for (n, line) in body.lines().enumerate() {
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Invariant(format!("action record {n} is not numeric")))?;
        match nums.as_slice() {
            [id, t, s, m] if *id as usize == n => rows.push([*t, *s, *m]),
            _ => return Err(Error::Invariant(format!("action record {n} is malformed"))),
        }
    }
    if rows.len() != census.len() {
        return Ok(Loaded::Stale(format!("{} rows for {} classes", rows.len(), census.len())));
    }
    Ok(Loaded::Ok(ClassAction::from_rows(census.degree(), &rows)?))
}

pub fn parse_component(line: &str) -> Result<CurveComponent> {
    let bad = |reason: &str| Error::Invariant(format!("component record {line:?}: {reason}"));
    let fs = fields(line);
    let num = |k: &str| -> Result<usize> { field(&fs, k).and_then(|v| v.parse().ok()).ok_or_else(|| bad(k)) };
    let members: Vec<u32> = field(&fs, "members")
        .and_then(|v| v.strip_prefix('[')?.strip_suffix(']'))
        .ok_or_else(|| bad("members"))?
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse().map_err(|_| bad("members")))
        .collect::<Result<_>>()?;
    let valency: Valency = field(&fs, "valency").ok_or_else(|| bad("valency"))?.parse()?;
    let genus = num("genus")? as u32;
    let index = num("index")?;
    if index != members.len() || curve_genus(index, &valency)? != genus {
        return Err(bad("index or genus inconsistent"));
    }
    Ok(CurveComponent {
        id: num("comp")? as u32,
        degree: num("degree")?,
        abelian: parse_bool(field(&fs, "abelian")).ok_or_else(|| bad("abelian"))?,
        members,
        valency,
        genus,
    })
}

pub fn parse_components(text: &str, census: &Census) -> Result<Loaded<Vec<CurveComponent>>> {
    let body = match check_header(text, Kind::Components, census.degree()) {
        Ok(b) => b,
        Err(why) => return Ok(Loaded::Stale(why)),
    };
    let comps: Vec<CurveComponent> = body.lines().map(parse_component).collect::<Result<_>>()?;
    let mut seen = vec![false; census.len()];
    for (k, c) in comps.iter().enumerate() {
        if c.id as usize != k || c.degree != census.degree() {
            return Err(Error::Invariant(format!("component record {k} out of order")));
        }
        for &m in &c.members {
            match seen.get_mut(m as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::Invariant(format!("component {k} repeats or overflows class {m}"))),
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Ok(Loaded::Stale("components do not cover the census".into()));
    }
    Ok(Loaded::Ok(comps))
}

/// Exclusive hold on a cache directory, released on drop.
#[derive(Debug)]
pub struct CacheLock {
    path: PathBuf,
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn process_alive(pid: u32) -> bool {
    let proc = Path::new("/proc");
    !proc.is_dir() || proc.join(pid.to_string()).exists()
}

/// A cache directory.
#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn open(root: impl Into<PathBuf>) -> Result<Cache> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| io_err(&root, e))?;
        Ok(Cache { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, kind: Kind, degree: usize) -> PathBuf {
        self.root.join(format!("{}-d{degree}.txt", kind.name()))
    }

    /// Takes the lock file, clearing it first if the process that wrote it is gone.
    pub fn lock(&self) -> Result<CacheLock> {
        let path = self.root.join(".lock");
        for _ in 0..2 {
            match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    write!(f, "{}", std::process::id()).map_err(|e| io_err(&path, e))?;
                    return Ok(CacheLock { path });
                }
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    let owner = fs::read_to_string(&path).ok().and_then(|s| s.trim().parse().ok());
                    match owner {
                        Some(pid) if !process_alive(pid) => {
                            let _ = fs::remove_file(&path);
                        }
                        _ => return Err(Error::Locked(self.root.clone())),
                    }
                }
                Err(e) => return Err(io_err(&path, e)),
            }
        }
        Err(Error::Locked(self.root.clone()))
    }

    fn read(&self, kind: Kind, degree: usize) -> Result<Option<String>> {
        let path = self.path(kind, degree);
        match fs::read_to_string(&path) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path, e)),
        }
    }

    /// Writes through a temporary file so readers never see a partial cache.
    pub fn write(&self, kind: Kind, degree: usize, text: &str) -> Result<PathBuf> {
        let path = self.path(kind, degree);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    fn load<T>(&self, kind: Kind, degree: usize, parse: impl FnOnce(&str) -> Result<Loaded<T>>) -> Result<Loaded<T>> {
        let Some(text) = self.read(kind, degree)? else {
            return Ok(Loaded::Missing);
        };
        parse(&text).map_err(|e| Error::Cache {
            path: self.path(kind, degree),
            reason: e.to_string(),
        })
    }

    pub fn load_census(&self, degree: usize) -> Result<Loaded<Census>> {
        self.load(Kind::Census, degree, |t| parse_census(t, degree))
    }

    pub fn load_action(&self, census: &Census) -> Result<Loaded<ClassAction>> {
        self.load(Kind::Action, census.degree(), |t| parse_action(t, census))
    }

    pub fn load_components(&self, census: &Census) -> Result<Loaded<Vec<CurveComponent>>> {
        self.load(Kind::Components, census.degree(), |t| parse_components(t, census))
    }

    /// Census from the cache, or computed and stored.
    pub fn census(&self, degree: usize, opts: &CensusOptions, force: bool) -> Result<Census> {
        if !force {
            match self.load_census(degree)? {
                Loaded::Ok(c) => return Ok(c),
                Loaded::Stale(why) => log::warn!("recomputing census for degree {degree}: {why}"),
                Loaded::Missing => {}
            }
        }
        let c = census_with(degree, opts)?;
        self.write(Kind::Census, degree, &census_text(&c))?;
        Ok(c)
    }

    pub fn action(&self, census: &Census, force: bool) -> Result<ClassAction> {
        if !force {
            match self.load_action(census)? {
                Loaded::Ok(a) => return Ok(a),
                Loaded::Stale(why) => log::warn!("recomputing action for degree {}: {why}", census.degree()),
                Loaded::Missing => {}
            }
        }
        let a = ClassAction::compute(census)?;
        self.write(Kind::Action, census.degree(), &action_text(&a))?;
        Ok(a)
    }

    pub fn components(&self, census: &Census, action: &ClassAction, force: bool) -> Result<Vec<CurveComponent>> {
        if !force {
            match self.load_components(census)? {
                Loaded::Ok(c) => return Ok(c),
                Loaded::Stale(why) => log::warn!("recomputing components for degree {}: {why}", census.degree()),
                Loaded::Missing => {}
            }
        }
        let abelian: Vec<bool> = census.classes().iter().map(|c| c.abelian).collect();
        let comps = components(action, &abelian)?;
        self.write(Kind::Components, census.degree(), &components_text(census.degree(), &comps))?;
        Ok(comps)
    }
}
