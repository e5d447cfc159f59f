//! Reading and writing the JSON file formats, with diagnostics that name
//! the offending file, path and position.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiberspace::FiberSpaceInstance;
use crate::invariants::{Divisor, Flag, VarietyModel};
use crate::rational::{serde_qs, Q};

/// Parses `text` as a `T`; `source` names the input in diagnostics.
pub fn parse<T: DeserializeOwned>(text: &str, source: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let mut location = source.to_string();
        if inner.line() > 0 {
            location.push_str(&format!(":{}:{}", inner.line(), inner.column()));
        }
        if path != "." {
            location.push_str(&format!(" at {path}"));
        }
        Error::parse(location, inner.to_string())
    })?;
    de.end().map_err(|e| {
        Error::parse(
            format!("{source}:{}:{}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    Ok(value)
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    parse(&text, &path.display().to_string())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn load_model(path: &Path) -> Result<VarietyModel> {
    load(path)
}

pub fn load_instance(path: &Path) -> Result<FiberSpaceInstance> {
    load(path)
}

/// A divisor file, checked against the model it will be used with.
pub fn load_divisor(path: &Path, model: &VarietyModel) -> Result<Divisor> {
    let d: Divisor = load(path)?;
    model
        .check_divisor(&d.coeffs)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    Ok(d)
}

pub fn load_flag(path: &Path, model: &VarietyModel) -> Result<Flag> {
    let f: Flag = load(path)?;
    model
        .check_flag(&f)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    Ok(f)
}

/// A body computation with its known volume: the model file is named
/// relative to the case file's parent directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub name: String,
    pub model: String,
    #[serde(with = "serde_qs")]
    pub divisor: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<Flag>,
    #[serde(with = "crate::rational::serde_q")]
    pub volume: Q,
}

impl Case {
    /// Loads the referenced model and checks the divisor and flag on it.
    pub fn resolve(&self, case_path: &Path) -> Result<(VarietyModel, Flag)> {
        let dir = case_path.parent().unwrap_or(Path::new("."));
        let model = load_model(&dir.join(&self.model))?;
        let located = |e: Error| Error::parse(case_path.display().to_string(), e.to_string());
        model.check_divisor(&self.divisor).map_err(located)?;
        let flag = self.flag.clone().unwrap_or_else(|| model.default_flag());
        model.check_flag(&flag).map_err(located)?;
        Ok((model, flag))
    }
}

/// What a JSON file holds, judged by its top-level keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Model,
    Divisor,
    Flag,
    Instance,
    Case,
}

impl FileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FileKind::Model => "model",
            FileKind::Divisor => "divisor",
            FileKind::Flag => "flag",
            FileKind::Instance => "instance",
            FileKind::Case => "case",
        }
    }
}

pub fn detect_kind(text: &str, source: &str) -> Result<FileKind> {
    let v: serde_json::Value = parse(text, source)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(source.to_string(), "expected a JSON object"))?;
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("kind") {
        FileKind::Model
    } else if has("base") && has("fiber") {
        FileKind::Instance
    } else if has("model") {
        FileKind::Case
    } else if has("coeffs") {
        FileKind::Divisor
    } else if has("ray_order") || has("curve") || has("point") {
        FileKind::Flag
    } else {
        return Err(Error::parse(
            source.to_string(),
            "unrecognised file: no model, divisor, flag, instance or case keys",
        ));
    })
}

/// Parses and validates a file of any kind, and checks that it serializes
/// back to an equal value.
pub fn validate_file(path: &Path) -> Result<FileKind> {
    let source = path.display().to_string();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::parse(source.clone(), e.to_string()))?;
    let kind = detect_kind(&text, &source)?;
    fn round_trip<T: DeserializeOwned + Serialize + PartialEq>(
        text: &str,
        source: &str,
    ) -> Result<()> {
        let value: T = parse(text, source)?;
        let back: T = parse(&to_json(&value), source)?;
        if back != value {
            return Err(Error::parse(
                source.to_string(),
                "value changes on re-serialization",
            ));
        }
        Ok(())
    }
    match kind {
        FileKind::Model => round_trip::<VarietyModel>(&text, &source)?,
        FileKind::Divisor => round_trip::<Divisor>(&text, &source)?,
        FileKind::Flag => round_trip::<Flag>(&text, &source)?,
        FileKind::Instance => round_trip::<FiberSpaceInstance>(&text, &source)?,
        FileKind::Case => {
            round_trip::<Case>(&text, &source)?;
            let case: Case = parse(&text, &source)?;
            case.resolve(path)?;
        }
    }
    Ok(kind)
}
