//! Line-oriented text format for trained models.
//!
//! ```text
//! uwb-nlos-model 1
//! family ggd
//! estimator standard
//! window 20
//! features first_path_power power_difference
//! epsilon -3.5
//! density first_path_power ggd -80.1 2.9 1.8
//! density power_difference ggd 3.0 1.3 2.1
//! end
//! ```
//!
//! Naive Bayes files use `family nb`, two `prior <class> <p>` lines and
//! `density <class> <feature> gd <mu> <sigma2>` lines. `#` starts a comment.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::classifiers::{AnomalyModel, NbModel};
use crate::distributions::{Density, EstimatorMode, Family, GaussianParams, GgdParams};
use crate::error::{Error, Result};
use crate::features::{parse_selection, FeatureName};
use crate::model::ClassLabel;

use super::dataset_csv::fmt_f64;

pub const MODEL_MAGIC: &str = "uwb-nlos-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum SavedModel {
    Anomaly(AnomalyModel),
    NaiveBayes(NbModel),
}

impl SavedModel {
    pub fn features(&self) -> &[FeatureName] {
        match self {
            SavedModel::Anomaly(m) => &m.features,
            SavedModel::NaiveBayes(m) => &m.features,
        }
    }

    pub fn window(&self) -> usize {
        match self {
            SavedModel::Anomaly(m) => m.window,
            SavedModel::NaiveBayes(m) => m.window,
        }
    }
}

fn density_fields(d: &Density) -> String {
    match d {
        Density::Gd(p) => format!("gd {} {}", fmt_f64(p.mu), fmt_f64(p.sigma2)),
        Density::Ggd(p) => format!(
            "ggd {} {} {}",
            fmt_f64(p.mu),
            fmt_f64(p.alpha),
            fmt_f64(p.beta)
        ),
    }
}

fn feature_list(names: &[FeatureName]) -> String {
    names
        .iter()
        .map(|n| n.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_model<W: Write>(mut w: W, model: &SavedModel) -> Result<()> {
    writeln!(w, "{MODEL_MAGIC} {MODEL_FORMAT_VERSION}")?;
    match model {
        SavedModel::Anomaly(m) => {
            writeln!(w, "family {}", m.family.as_str())?;
            writeln!(w, "estimator {}", m.estimator)?;
            writeln!(w, "window {}", m.window)?;
            writeln!(w, "features {}", feature_list(&m.features))?;
            match m.epsilon {
                Some(e) => writeln!(w, "epsilon {}", fmt_f64(e))?,
                None => writeln!(w, "epsilon none")?,
            }
            for (name, d) in m.features.iter().zip(&m.params) {
                writeln!(w, "density {name} {}", density_fields(d))?;
            }
        }
        SavedModel::NaiveBayes(m) => {
            writeln!(w, "family nb")?;
            writeln!(w, "estimator {}", m.estimator)?;
            writeln!(w, "window {}", m.window)?;
            writeln!(w, "features {}", feature_list(&m.features))?;
            for class in ClassLabel::ALL {
                writeln!(w, "prior {class} {}", fmt_f64(m.priors[class.index()]))?;
            }
            for class in ClassLabel::ALL {
                for (name, p) in m.features.iter().zip(&m.params[class.index()]) {
                    writeln!(
                        w,
                        "density {class} {name} {}",
                        density_fields(&Density::Gd(*p))
                    )?;
                }
            }
        }
    }
    writeln!(w, "end")?;
    Ok(())
}

pub fn model_to_string(model: &SavedModel) -> String {
    let mut buf = Vec::new();
    write_model(&mut buf, model).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("model text is ASCII")
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    rest: Vec<&'a str>,
}

fn bad(no: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: no,
        message: message.into(),
    }
}

fn num(no: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| !v.is_nan())
        .ok_or_else(|| bad(no, format!("invalid number `{s}`")))
}

fn parse_density(no: usize, fields: &[&str]) -> Result<Density> {
    let wrap = |e: Error| bad(no, e.to_string());
    match fields {
        ["gd", mu, s2] => Ok(Density::Gd(
            GaussianParams::new(num(no, mu)?, num(no, s2)?).map_err(wrap)?,
        )),
        ["ggd", mu, a, b] => Ok(Density::Ggd(
            GgdParams::new(num(no, mu)?, num(no, a)?, num(no, b)?).map_err(wrap)?,
        )),
        _ => Err(bad(
            no,
            "expected `gd <mu> <sigma2>` or `ggd <mu> <alpha> <beta>`",
        )),
    }
}

pub fn parse_model(text: &str) -> Result<SavedModel> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(no, l)| {
            let mut it = l.split_whitespace();
            let key = it.next().unwrap_or("");
            Line {
                no,
                key,
                rest: it.collect(),
            }
        });

    match lines.next() {
        Some(Line { key, rest, .. }) if key == MODEL_MAGIC => {
            let version = rest.first().copied().unwrap_or("");
            if version != MODEL_FORMAT_VERSION.to_string() {
                return Err(Error::Format(format!(
                    "unsupported model format version `{version}` (expected {MODEL_FORMAT_VERSION})"
                )));
            }
        }
        _ => return Err(Error::Format(format!("missing `{MODEL_MAGIC}` header"))),
    }

    let mut scalars: HashMap<&str, (usize, Vec<&str>)> = HashMap::new();
    let mut priors: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut densities: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut ended = false;
    for line in lines {
        if ended {
            return Err(bad(line.no, "content after `end`"));
        }
        match line.key {
            "end" => ended = true,
            "prior" => priors.push((line.no, line.rest)),
            "density" => densities.push((line.no, line.rest)),
            k @ ("family" | "estimator" | "window" | "features" | "epsilon") => {
                if scalars.insert(k, (line.no, line.rest)).is_some() {
                    return Err(bad(line.no, format!("duplicate `{k}`")));
                }
            }
            other => return Err(bad(line.no, format!("unknown key `{other}`"))),
        }
    }
    if !ended {
        return Err(Error::Format(
            "model file is truncated (no `end` line)".into(),
        ));
    }

    let get = |k: &str| {
        scalars
            .get(k)
            .ok_or_else(|| Error::Format(format!("model file lacks `{k}`")))
    };
    let single = |k: &str| -> Result<(usize, &str)> {
        let (no, rest) = get(k)?;
        match rest.as_slice() {
            [v] => Ok((*no, *v)),
            _ => Err(bad(*no, format!("`{k}` takes exactly one value"))),
        }
    };

    let (no, fam) = single("family")?;
    let (eno, est) = single("estimator")?;
    let estimator: EstimatorMode = est.parse().map_err(|e: Error| bad(eno, e.to_string()))?;
    let (wno, win) = single("window")?;
    let window: usize = win
        .parse()
        .ok()
        .filter(|&w| w >= 2)
        .ok_or_else(|| bad(wno, format!("invalid window `{win}`")))?;
    let (fno, frest) = get("features")?;
    let features = parse_selection(&frest.join(",")).map_err(|e| bad(*fno, e.to_string()))?;

    if fam == "nb" {
        if scalars.contains_key("epsilon") {
            return Err(bad(no, "naive Bayes models carry no epsilon"));
        }
        let mut p = [f64::NAN; 2];
        for (pno, rest) in &priors {
            match rest.as_slice() {
                [class, v] => {
                    let c: ClassLabel =
                        class.parse().map_err(|e: Error| bad(*pno, e.to_string()))?;
                    p[c.index()] = num(*pno, v)?;
                }
                _ => return Err(bad(*pno, "expected `prior <class> <p>`")),
            }
        }
        if p.iter().any(|v| !(*v > 0.0 && *v < 1.0)) || ((p[0] + p[1]) - 1.0).abs() > 1e-9 {
            return Err(Error::Format(
                "priors must be given for both classes, in (0,1), summing to 1".into(),
            ));
        }
        let mut params: [Vec<Option<GaussianParams>>; 2] =
            [vec![None; features.len()], vec![None; features.len()]];
        for (dno, rest) in &densities {
            let (class, name, fields) = match rest.as_slice() {
                [c, n, f @ ..] => (c, n, f),
                _ => return Err(bad(*dno, "expected `density <class> <feature> gd …`")),
            };
            let c: ClassLabel = class.parse().map_err(|e: Error| bad(*dno, e.to_string()))?;
            let j = position(&features, name, *dno)?;
            match parse_density(*dno, fields)? {
                Density::Gd(g) => params[c.index()][j] = Some(g),
                Density::Ggd(_) => return Err(bad(*dno, "naive Bayes densities must be gd")),
            }
        }
        let [p0, p1] = params.map(|v| v.into_iter().collect::<Option<Vec<_>>>());
        let params = [p0, p1];
        match params {
            [Some(a), Some(b)] => Ok(SavedModel::NaiveBayes(NbModel {
                features,
                priors: p,
                params: [a, b],
                window,
                estimator,
            })),
            _ => Err(Error::Format("missing class-conditional density".into())),
        }
    } else {
        let family: Family = fam.parse().map_err(|e: Error| bad(no, e.to_string()))?;
        if !priors.is_empty() {
            return Err(bad(priors[0].0, "anomaly models carry no priors"));
        }
        let (epno, eps) = single("epsilon")?;
        let epsilon = match eps {
            "none" => None,
            v => Some(num(epno, v)?),
        };
        let mut params: Vec<Option<Density>> = vec![None; features.len()];
        for (dno, rest) in &densities {
            let (name, fields) = match rest.as_slice() {
                [n, f @ ..] => (n, f),
                _ => return Err(bad(*dno, "expected `density <feature> …`")),
            };
            let j = position(&features, name, *dno)?;
            let d = parse_density(*dno, fields)?;
            if d.family() != family {
                return Err(bad(
                    *dno,
                    format!("density family differs from model family {family}"),
                ));
            }
            params[j] = Some(d);
        }
        let params = params
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Format("missing density for a listed feature".into()))?;
        Ok(SavedModel::Anomaly(AnomalyModel {
            family,
            features,
            params,
            epsilon,
            window,
            estimator,
        }))
    }
}

fn position(features: &[FeatureName], name: &str, no: usize) -> Result<usize> {
    let f: FeatureName = name.parse().map_err(|e: Error| bad(no, e.to_string()))?;
    features
        .iter()
        .position(|&x| x == f)
        .ok_or_else(|| bad(no, format!("feature `{name}` is not in the feature list")))
}

pub fn save_model(model: &SavedModel, path: impl AsRef<Path>) -> Result<()> {
    super::write(path.as_ref(), &model_to_string(model))?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<SavedModel> {
    parse_model(&super::read_to_string(path.as_ref())?)
}
