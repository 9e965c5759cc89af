use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde_json::json;

use origami::classifier::{CensusOptions, MAX_CENSUS_DEGREE};
use origami::curve::{component_of, export_diagram, veech_data, CurveComponent};
use origami::invariants::{origami_genus, stratum};
use origami::store::{Cache, CacheLock};
use origami::{galois_report, Census, ClassAction, Origami};

use crate::{Command, Common, Format};

struct Ctx {
    cache: Cache,
    _lock: CacheLock,
    opts: CensusOptions,
    force: bool,
    format: Format,
}

fn default_cache_dir() -> PathBuf {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(x).join("origami");
    }
    if let Some(h) = std::env::var_os("HOME") {
        return PathBuf::from(h).join(".cache").join("origami");
    }
    PathBuf::from(".origami-cache")
}

fn setup(c: &Common) -> Result<Ctx> {
    if let Some(n) = c.workers {
        // only fails if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global();
    }
    let dir = c.cache.clone().unwrap_or_else(default_cache_dir);
    let cache = Cache::open(&dir)?;
    let lock = cache.lock()?;
    log::debug!("cache directory {}", dir.display());
    Ok(Ctx {
        cache,
        _lock: lock,
        opts: CensusOptions {
            workers: c.workers.map(|n| n as usize),
            memory_budget_mib: c.memory_budget,
            ..CensusOptions::default()
        },
        force: c.force,
        format: c.format,
    })
}

fn need_degree(c: &Common) -> Result<usize> {
    match c.degree {
        Some(0) => bail!("degree must be at least 1"),
        Some(d) => Ok(d),
        None => bail!("--degree is required"),
    }
}

struct Pipeline {
    census: Census,
    action: ClassAction,
    comps: Vec<CurveComponent>,
}

impl Ctx {
    fn census(&self, d: usize) -> Result<Census> {
        let t = std::time::Instant::now();
        let c = self.cache.census(d, &self.opts, self.force)?;
        log::info!("census of degree {d}: {} classes in {:.2?}", c.len(), t.elapsed());
        Ok(c)
    }

    fn pipeline(&self, d: usize) -> Result<Pipeline> {
        let census = self.census(d)?;
        let t = std::time::Instant::now();
        let action = self.cache.action(&census, self.force)?;
        let comps = self.cache.components(&census, &action, self.force)?;
        log::info!("{} components in {:.2?}", comps.len(), t.elapsed());
        Ok(Pipeline { census, action, comps })
    }
}

pub fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Census(c) => census_cmd(&c),
        Command::Curves(c) => curves_cmd(&c),
        Command::Report(c) => report_cmd(&c),
        Command::Info { common, origami } => info_cmd(&common, &origami),
        Command::Diagram {
            common,
            component,
            output,
        } => diagram_cmd(&common, component, output),
    }
}

fn census_cmd(c: &Common) -> Result<String> {
    let d = need_degree(c)?;
    let ctx = setup(c)?;
    let census = ctx.census(d)?;
    let (ab, nonab) = census.counts();
    Ok(match ctx.format {
        Format::Text => format!("abelian={ab} non-abelian={nonab}\n"),
        Format::Json => {
            json!({ "degree": d, "abelian": ab, "non_abelian": nonab }).to_string() + "\n"
        }
        Format::Csv => format!("degree,abelian,non_abelian\n{d},{ab},{nonab}\n"),
    })
}

fn genus_range<'a>(comps: impl Iterator<Item = &'a CurveComponent>) -> Option<(u32, u32)> {
    comps.fold(None, |acc, c| match acc {
        None => Some((c.genus, c.genus)),
        Some((lo, hi)) => Some((lo.min(c.genus), hi.max(c.genus))),
    })
}

fn range_text(r: Option<(u32, u32)>) -> String {
    r.map_or("-".into(), |(lo, hi)| format!("{lo}..{hi}"))
}

fn curves_cmd(c: &Common) -> Result<String> {
    let d = need_degree(c)?;
    let ctx = setup(c)?;
    let p = ctx.pipeline(d)?;
    let side = |ab: bool| p.comps.iter().filter(move |k| k.abelian == ab);
    let (n_ab, n_non) = (side(true).count(), side(false).count());
    let (g_ab, g_non, g_all) = (genus_range(side(true)), genus_range(side(false)), genus_range(p.comps.iter()));
    Ok(match ctx.format {
        Format::Text => format!(
            "abelian components={n_ab} non-abelian={n_non} genus={}\ngenus abelian={} non-abelian={}\n",
            range_text(g_all),
            range_text(g_ab),
            range_text(g_non)
        ),
        Format::Json => {
            let g = |r: Option<(u32, u32)>| r.map(|(lo, hi)| json!({ "min": lo, "max": hi }));
            json!({
                "degree": d,
                "abelian": { "components": n_ab, "genus": g(g_ab) },
                "non_abelian": { "components": n_non, "genus": g(g_non) },
            })
            .to_string()
                + "\n"
        }
        Format::Csv => {
            let mut s = String::from("comp,abelian,index,valency,genus\n");
            for k in &p.comps {
                let _ = writeln!(s, "{},{},{},\"{}\",{}", k.id, u8::from(k.abelian), k.index(), k.valency, k.genus);
            }
            s
        }
    })
}

fn report_cmd(c: &Common) -> Result<String> {
    let d = need_degree(c)?;
    let ctx = setup(c)?;
    let p = ctx.pipeline(d)?;
    let report = galois_report(&p.census, &p.action, &p.comps)?;
    Ok(match ctx.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv()?,
    })
}

fn info_cmd(c: &Common, text: &str) -> Result<String> {
    let o: Origami = text.parse().with_context(|| format!("cannot read origami {text:?}"))?;
    let d = o.degree();
    if let Some(given) = c.degree {
        if given != d {
            bail!("--degree {given} does not match the origami's {d} cells");
        }
    }
    let mut fields: Vec<(&str, serde_json::Value)> = vec![
        ("origami", json!(o.to_string())),
        ("degree", json!(d)),
        ("connected", json!(o.is_connected())),
    ];
    if o.is_connected() {
        let st = stratum(&o)?;
        fields.push(("abelian", json!(o.is_abelian()?)));
        fields.push(("stratum", json!(st.to_string())));
        fields.push(("genus", json!(origami_genus(&o)?)));
        if d <= MAX_CENSUS_DEGREE {
            let ctx = setup(c)?;
            let p = ctx.pipeline(d)?;
            let id = p.census.classify(&o)?;
            let comp = &p.comps[component_of(&p.comps, p.census.len())[id as usize] as usize];
            let veech = veech_data(comp, id, &p.action)?;
            let gens: Vec<String> = veech.generators.iter().map(ToString::to_string).collect();
            fields.push(("class", json!(id)));
            fields.push(("component", json!(comp.id)));
            fields.push(("index", json!(comp.index())));
            fields.push(("valency", json!(comp.valency.to_string())));
            fields.push(("curve genus", json!(comp.genus)));
            fields.push(("veech generators", json!(gens)));
        } else {
            log::warn!("degree {d} is above the census limit {MAX_CENSUS_DEGREE}; class data skipped");
        }
    }
    Ok(match c.format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                fields.into_iter().map(|(k, v)| (k.replace(' ', "_"), v)).collect();
            serde_json::Value::Object(map).to_string() + "\n"
        }
        Format::Text | Format::Csv => {
            let mut s = String::new();
            for (k, v) in fields {
                let v = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Array(a) => a
                        .iter()
                        .map(|w| w.as_str().unwrap_or_default().to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "{k}: {v}");
            }
            s
        }
    })
}

fn diagram_cmd(c: &Common, component: u32, output: Option<PathBuf>) -> Result<String> {
    let d = need_degree(c)?;
    let ctx = setup(c)?;
    let p = ctx.pipeline(d)?;
    let Some(comp) = p.comps.get(component as usize) else {
        bail!("degree {d} has {} components, no component {component}", p.comps.len());
    };
    let dot = export_diagram(comp, &p.action)?;
    let path = output.unwrap_or_else(|| ctx.cache.root().join(format!("diagram-d{d}-c{component}.dot")));
    std::fs::write(&path, dot).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(format!("wrote {}\n", path.display()))
}
