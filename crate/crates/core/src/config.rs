//! JSON configuration trees: presets, file loading, dotted-path overrides and
//! the Hz-to-angular convention table.
//!
//! Frequencies in a config file are plain Hz. Fields marked angular in the
//! table are multiplied by 2π on resolution; the others (microwave Rabi
//! frequencies and splittings entering δt = π/Ω, the ED control Rabi
//! frequency and shift error) are used as written.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::dipole::{DipoleConfig, EdConfig};
use crate::error::{Error, Result};
use crate::exchange::ExchangeConfig;
use crate::interference::InterferenceConfig;
use crate::params::{
    derive_cavity, derive_cavity_from_c, CavitySet, DetectionChain, EmitterParams, PhysConsts, ScenarioAnchor,
    ScenarioPreset, DETECTION_DEFAULT, ETA_R_DEFAULT, ETA_ZPL, GAMMA_STAR_BULK_HZ, G_ELECTRON, G_HOLE, SCENARIO1,
    SCENARIO2, T1_SPIN, T2_SPIN,
};
use crate::scattering::{ScatteringConfig, SigmaMode};

/// Sections of the tree that hold parameters.
pub const SECTIONS: [&str; 4] = ["emitter", "cavity", "detection", "scheme"];

/// Default unit convention: `true` means the file value is in Hz and stored as 2π times it.
pub const ANGULAR_DEFAULT: [(&str, bool); 21] = [
    ("emitter.gamma", true),
    ("emitter.gamma_star", true),
    ("cavity.g_coupling", true),
    ("cavity.kappa", true),
    ("cavity.gamma_prime", true),
    ("scheme.interference.delta", true),
    ("scheme.scattering.sigma_p", true),
    ("scheme.scattering.delta_p", true),
    ("scheme.scattering.delta_eps_a", true),
    ("scheme.scattering.delta_eps_b", true),
    ("scheme.mdg.rabi", false),
    ("scheme.mdg.splitting", false),
    ("scheme.mde.rabi", false),
    ("scheme.mde.splitting", false),
    ("scheme.ed.rabi_control", false),
    ("scheme.ed.delta_nu_error", false),
    ("scheme.exchange.delta_eps", true),
    ("scheme.exchange.delta_eg", true),
    ("scheme.exchange.two_photon_error", true),
    ("scheme.exchange.cavity_detuning", true),
    ("scheme.exchange.rabi", true),
];

const DEFAULT_PRESET: &str = "scenario1";
const DEFAULT_DETECTION_TIME: f64 = 10e-9;
const DEFAULT_G_OVER_KAPPA: f64 = 0.008;
const HOLE_SPIN_LIFETIME: f64 = 100e-9;

/// A configuration in file units, ready for overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigTree {
    root: Value,
    angular: BTreeMap<String, bool>,
    raw_angular: bool,
}

/// A resolved configuration in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub preset: ScenarioPreset,
    pub interference: InterferenceConfig,
    pub scattering: ScatteringConfig,
    /// Emitter separation shared by the dipolar schemes, metres.
    pub distance: f64,
    pub mdg: DipoleConfig,
    pub mde: DipoleConfig,
    pub nuclear_decay: f64,
    pub nuclear_dephasing: f64,
    pub hole_spin_lifetime: f64,
    pub ed: EdConfig,
    pub exchange: ExchangeConfig,
    pub consts: PhysConsts,
}

fn anchor_by_name(name: &str) -> Result<&'static ScenarioAnchor> {
    match name {
        "scenario1" => Ok(&SCENARIO1),
        "scenario2" => Ok(&SCENARIO2),
        other => Err(Error::config(
            "preset",
            format!("unknown preset `{other}` (expected scenario1 or scenario2)"),
        )),
    }
}

fn dipole_section(d: &DipoleConfig) -> Value {
    json!({
        "rabi": d.rabi,
        "splitting": d.splitting,
        "g_par": d.g_par,
        "g_perp": d.g_perp,
        "branching": d.branching,
    })
}

fn preset_tree(anchor: &ScenarioAnchor) -> Value {
    let ed = EdConfig::default();
    let mdg = DipoleConfig::mdg_default();
    let ex = ExchangeConfig::default();
    json!({
        "preset": anchor.name,
        "emitter": {
            "gamma": null,
            "gamma_star": GAMMA_STAR_BULK_HZ,
            "t1_spin": T1_SPIN,
            "t2_spin": T2_SPIN,
            "eta_zpl": ETA_ZPL,
            "eta_r": ETA_R_DEFAULT,
            "g_ground": [G_ELECTRON, G_ELECTRON, G_ELECTRON],
            "g_excited": [G_HOLE, G_HOLE, G_HOLE],
        },
        "cavity": {
            "g_coupling": null,
            "kappa": null,
            "cooperativity": null,
            "purcell": anchor.purcell,
            "gamma_prime": anchor.gamma_prime_hz,
            "eta_em": null,
        },
        "detection": {
            "eta_d": DETECTION_DEFAULT.eta_d,
            "eta_c": DETECTION_DEFAULT.eta_c,
        },
        "scheme": {
            "interference": {
                "detection_time": DEFAULT_DETECTION_TIME,
                "delta_t": anchor.delta_t,
                "delta": 0.0,
                "phi_init": 0.0,
                "phi_prop": 0.0,
            },
            "scattering": {
                "sigma_p": null,
                "sigma_mode": null,
                "delta_p": 0.0,
                "delta_eps_a": 0.0,
                "delta_eps_b": 0.0,
                "g_over_kappa": DEFAULT_G_OVER_KAPPA,
            },
            "dipole": {
                "distance": mdg.distance,
                "nuclear_decay": 0.0,
                "nuclear_dephasing": 0.0,
                "hole_spin_lifetime": HOLE_SPIN_LIFETIME,
            },
            "mdg": dipole_section(&mdg),
            "mde": dipole_section(&DipoleConfig::mde_default()),
            "ed": {
                "delta_mu": ed.delta_mu,
                "refractive_index": ed.refractive_index,
                "orientation_factor": ed.orientation_factor,
                "rabi_control": ed.rabi_control,
                "delta_nu_error": ed.delta_nu_error,
            },
            "exchange": {
                "delta_eps": ex.delta_eps / TAU,
                "delta_eg": ex.delta_eg / TAU,
                "two_photon_error": ex.two_photon_error / TAU,
                "cavity_detuning": ex.cavity_detuning / TAU,
                "rabi": ex.rabi / TAU,
                "g_over_kappa": ex.g_over_kappa,
                "shelving_decoherence": null,
            },
        },
    })
}

fn pointer(path: &str) -> String {
    format!("/{}", path.replace('.', "/"))
}

/// f64 as a JSON value; non-finite numbers become strings ("inf", "NaN").
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(v.to_string()), Value::Number)
}

fn collect_leaves(v: &Value, prefix: &str, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                collect_leaves(child, &format!("{prefix}.{k}"), out);
            }
        }
        _ => out.push(prefix.to_string()),
    }
}

fn merge(base: &mut Value, file: &Map<String, Value>, prefix: &str) -> Result<()> {
    let Value::Object(base_map) = base else {
        return Err(Error::config(prefix, "not a section"));
    };
    for (k, v) in file {
        let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        let Some(slot) = base_map.get_mut(k) else {
            return Err(Error::config(path, "unknown key"));
        };
        match (slot.is_object(), v) {
            (true, Value::Object(inner)) => merge(slot, inner, &path)?,
            (true, _) => return Err(Error::config(path, "expected a section object")),
            (false, Value::Object(_)) => return Err(Error::config(path, "expected a value, got an object")),
            (false, _) => *slot = v.clone(),
        }
    }
    Ok(())
}

impl ConfigTree {
    /// The tree for a named preset.
    pub fn preset(name: &str) -> Result<Self> {
        let anchor = anchor_by_name(name)?;
        Ok(Self {
            root: preset_tree(anchor),
            angular: ANGULAR_DEFAULT.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            raw_angular: false,
        })
    }

    /// Parse a config file body. A top-level `preset` names the base
    /// (scenario1 when absent); every other key must exist in that base.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: Value =
            serde_json::from_str(text).map_err(|e| Error::config("<file>", format!("invalid JSON: {e}")))?;
        let Value::Object(mut file) = file else {
            return Err(Error::config("<file>", "top level must be an object"));
        };
        let base = match file.remove("preset") {
            None => DEFAULT_PRESET.to_string(),
            Some(Value::String(s)) => s,
            Some(other) => return Err(Error::config("preset", format!("expected a preset name, got {other}"))),
        };
        let mut tree = Self::preset(&base)?;
        if let Some(table) = file.remove("angular") {
            let Value::Object(table) = table else {
                return Err(Error::config("angular", "expected an object of path: bool"));
            };
            for (k, v) in table {
                let path = format!("angular.{k}");
                let Some(slot) = tree.angular.get_mut(&k) else {
                    return Err(Error::config(path, "not a frequency field"));
                };
                *slot = v.as_bool().ok_or_else(|| Error::config(path, "expected true or false"))?;
            }
        }
        for k in file.keys() {
            if !SECTIONS.contains(&k.as_str()) {
                return Err(Error::config(k.clone(), "unknown key"));
            }
        }
        merge(&mut tree.root, &file, "")?;
        Ok(tree)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), format!("cannot read: {e}")))?;
        Self::from_json(&text)
    }

    /// Disable every Hz-to-angular conversion.
    pub fn with_raw_angular(mut self, raw: bool) -> Self {
        self.raw_angular = raw;
        self
    }

    pub fn preset_name(&self) -> &str {
        self.root["preset"].as_str().unwrap_or(DEFAULT_PRESET)
    }

    /// All settable leaf paths.
    pub fn leaf_paths(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in SECTIONS {
            collect_leaves(&self.root[s], s, &mut out);
        }
        out
    }

    /// Expand a key to its full path. Any dot-separated suffix of a full
    /// path is accepted when it is unambiguous (`cooperativity`, `mdg.rabi`).
    pub fn canonical_path(&self, key: &str) -> Result<String> {
        let matches: Vec<String> = self
            .leaf_paths()
            .into_iter()
            .filter(|p| p == key || p.ends_with(&format!(".{key}")))
            .collect();
        match matches.as_slice() {
            [one] => Ok(one.clone()),
            [] => Err(Error::config(key, "unknown key")),
            many => Err(Error::config(key, format!("ambiguous key, matches {}", many.join(", ")))),
        }
    }

    pub fn get(&self, key: &str) -> Result<&Value> {
        let path = self.canonical_path(key)?;
        Ok(self.root.pointer(&pointer(&path)).expect("leaf paths exist"))
    }

    pub fn set(&mut self, key: &str, value: Value) -> Result<()> {
        if value.is_object() {
            return Err(Error::config(key, "expected a value, got an object"));
        }
        let path = self.canonical_path(key)?;
        *self.root.pointer_mut(&pointer(&path)).expect("leaf paths exist") = value;
        Ok(())
    }

    pub fn set_f64(&mut self, key: &str, v: f64) -> Result<()> {
        self.set(key, number(v))
    }

    /// Apply `key=value`; the value is read as JSON, falling back to a plain string.
    pub fn assign(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(assignment, "expected key=value"))?;
        let (key, raw) = (key.trim(), raw.trim());
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        self.set(key, value)
    }

    /// The full tree, including the convention table, as JSON.
    pub fn to_value(&self) -> Value {
        let mut v = self.root.clone();
        v["angular"] = Value::Object(self.angular.iter().map(|(k, b)| (k.clone(), Value::Bool(*b))).collect());
        v
    }

    /// Convert to internal units, derive the cavity set and validate.
    pub fn resolve(&self) -> Result<Config> {
        let r = Reader { tree: self };

        let e = "emitter";
        let mut emitter = EmitterParams {
            gamma: f64::NAN,
            gamma_star: r.freq(&format!("{e}.gamma_star"))?,
            t1_spin: r.num(&format!("{e}.t1_spin"))?,
            t2_spin: r.num(&format!("{e}.t2_spin"))?,
            eta_zpl: r.num(&format!("{e}.eta_zpl"))?,
            eta_r: r.num(&format!("{e}.eta_r"))?,
            g_ground: r.array(&format!("{e}.g_ground"))?,
            g_excited: r.array(&format!("{e}.g_excited"))?,
        };
        let cavity = resolve_cavity(&r, &mut emitter)?;
        emitter.validate()?;

        let detection = DetectionChain {
            eta_d: r.num("detection.eta_d")?,
            eta_c: r.num("detection.eta_c")?,
        };
        detection.validate()?;

        let i = "scheme.interference";
        let interference = InterferenceConfig {
            detection_time: r.num(&format!("{i}.detection_time"))?,
            delta_t: r.num(&format!("{i}.delta_t"))?,
            delta: r.freq(&format!("{i}.delta"))?,
            phi_init: r.num(&format!("{i}.phi_init"))?,
            phi_prop: r.num(&format!("{i}.phi_prop"))?,
        };
        interference.validate()?;

        let s = "scheme.scattering";
        let sigma_p = r.opt_freq(&format!("{s}.sigma_p"))?;
        let sigma_mode = match (r.text(&format!("{s}.sigma_mode"))?.as_deref(), sigma_p) {
            (None, Some(_)) | (Some("fixed"), Some(_)) => SigmaMode::Fixed,
            (None, None) | (Some("closed"), _) => SigmaMode::Closed,
            (Some("numeric"), _) => SigmaMode::Numeric,
            (Some("fixed"), None) => {
                return Err(Error::config(format!("{s}.sigma_p"), "sigma_mode fixed needs sigma_p"));
            }
            (Some(other), _) => {
                return Err(Error::config(
                    format!("{s}.sigma_mode"),
                    format!("expected closed, numeric or fixed, got `{other}`"),
                ));
            }
        };
        let scattering = ScatteringConfig {
            sigma_p: sigma_p.unwrap_or(f64::NAN),
            delta_p: r.freq(&format!("{s}.delta_p"))?,
            delta_eps_a: r.freq(&format!("{s}.delta_eps_a"))?,
            delta_eps_b: r.freq(&format!("{s}.delta_eps_b"))?,
            g_over_kappa: r.num(&format!("{s}.g_over_kappa"))?,
            sigma_mode,
        };

        let distance = r.num("scheme.dipole.distance")?;
        let dipole = |name: &str| -> Result<DipoleConfig> {
            let p = format!("scheme.{name}");
            let cfg = DipoleConfig {
                distance,
                rabi: r.freq(&format!("{p}.rabi"))?,
                splitting: r.freq(&format!("{p}.splitting"))?,
                g_par: r.num(&format!("{p}.g_par"))?,
                g_perp: r.num(&format!("{p}.g_perp"))?,
                branching: r.array(&format!("{p}.branching"))?,
            };
            cfg.validate()?;
            Ok(cfg)
        };
        let (mdg, mde) = (dipole("mdg")?, dipole("mde")?);

        let d = "scheme.ed";
        let ed = EdConfig {
            delta_mu: r.num(&format!("{d}.delta_mu"))?,
            refractive_index: r.num(&format!("{d}.refractive_index"))?,
            orientation_factor: r.num(&format!("{d}.orientation_factor"))?,
            rabi_control: r.freq(&format!("{d}.rabi_control"))?,
            delta_nu_error: r.freq(&format!("{d}.delta_nu_error"))?,
        };
        ed.validate()?;

        let x = "scheme.exchange";
        let exchange = ExchangeConfig {
            delta_eps: r.freq(&format!("{x}.delta_eps"))?,
            delta_eg: r.freq(&format!("{x}.delta_eg"))?,
            two_photon_error: r.freq(&format!("{x}.two_photon_error"))?,
            cavity_detuning: r.freq(&format!("{x}.cavity_detuning"))?,
            rabi: r.freq(&format!("{x}.rabi"))?,
            g_over_kappa: r.num(&format!("{x}.g_over_kappa"))?,
            shelving_decoherence: r.opt(&format!("{x}.shelving_decoherence"))?,
        };

        Ok(Config {
            preset: ScenarioPreset {
                name: self.preset_name().to_string(),
                emitter,
                cavity,
                detection,
                delta_t: interference.delta_t,
            },
            interference,
            scattering,
            distance,
            mdg,
            mde,
            nuclear_decay: r.num("scheme.dipole.nuclear_decay")?,
            nuclear_dephasing: r.num("scheme.dipole.nuclear_dephasing")?,
            hole_spin_lifetime: r.num("scheme.dipole.hole_spin_lifetime")?,
            ed,
            exchange,
            consts: PhysConsts::CODATA2018,
        })
    }
}

/// Bare γ: explicit, or from γ′ at the reference cooperativity (Purcell
/// factor when given, else the cooperativity). Operating point: g and κ,
/// else the cooperativity, else the Purcell factor.
fn resolve_cavity(r: &Reader, emitter: &mut EmitterParams) -> Result<CavitySet> {
    let zpl = emitter.eta_r * emitter.eta_zpl;
    let purcell = r.opt("cavity.purcell")?;
    let coop = r.opt("cavity.cooperativity")?;
    let c_ref = purcell.map(|f| f * zpl).or(coop);

    emitter.gamma = match (r.opt_freq("emitter.gamma")?, r.opt_freq("cavity.gamma_prime")?, c_ref) {
        (Some(g), _, _) => g,
        (None, Some(gp), Some(c)) => gp / (1.0 + c),
        _ => {
            return Err(Error::config(
                "emitter.gamma",
                "unset, and cavity.gamma_prime with a purcell factor or cooperativity is needed to derive it",
            ));
        }
    };

    let mut set = match (r.opt_freq("cavity.g_coupling")?, r.opt_freq("cavity.kappa")?) {
        (Some(g), Some(k)) => derive_cavity(g, k, emitter)?,
        (Some(_), None) => return Err(Error::config("cavity.kappa", "g_coupling is set but kappa is not")),
        (None, Some(_)) => return Err(Error::config("cavity.g_coupling", "kappa is set but g_coupling is not")),
        (None, None) => match coop.or(c_ref) {
            Some(c) => derive_cavity_from_c(c, emitter)?,
            None => {
                return Err(Error::config(
                    "cavity.cooperativity",
                    "no operating point: set g_coupling and kappa, cooperativity or purcell",
                ));
            }
        },
    };
    if let Some(eta) = r.opt("cavity.eta_em")? {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::config("cavity.eta_em", format!("must lie in [0, 1], got {eta}")));
        }
        set.eta_em = eta;
    }
    Ok(set)
}

struct Reader<'a> {
    tree: &'a ConfigTree,
}

impl Reader<'_> {
    fn value(&self, path: &str) -> &Value {
        self.tree.root.pointer(&pointer(path)).expect("resolver reads known paths")
    }

    fn opt(&self, path: &str) -> Result<Option<f64>> {
        match self.value(path) {
            Value::Null => Ok(None),
            Value::Number(n) => Ok(n.as_f64()),
            Value::String(s) => s
                .trim()
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::config(path, format!("expected a number, got \"{s}\""))),
            other => Err(Error::config(path, format!("expected a number, got {other}"))),
        }
    }

    fn num(&self, path: &str) -> Result<f64> {
        self.opt(path)?.ok_or_else(|| Error::config(path, "required"))
    }

    fn scale(&self, path: &str) -> f64 {
        let angular = self.tree.angular.get(path).copied().unwrap_or(false);
        if angular && !self.tree.raw_angular {
            TAU
        } else {
            1.0
        }
    }

    fn opt_freq(&self, path: &str) -> Result<Option<f64>> {
        Ok(self.opt(path)?.map(|v| v * self.scale(path)))
    }

    fn freq(&self, path: &str) -> Result<f64> {
        self.opt_freq(path)?.ok_or_else(|| Error::config(path, "required"))
    }

    fn text(&self, path: &str) -> Result<Option<String>> {
        match self.value(path) {
            Value::Null => Ok(None),
            Value::String(s) => Ok(Some(s.clone())),
            other => Err(Error::config(path, format!("expected a string, got {other}"))),
        }
    }

    fn array<const N: usize>(&self, path: &str) -> Result<[f64; N]> {
        let bad = || Error::config(path, format!("expected an array of {N} numbers"));
        let items = self.value(path).as_array().ok_or_else(bad)?;
        if items.len() != N {
            return Err(bad());
        }
        let mut out = [0.0; N];
        for (slot, item) in out.iter_mut().zip(items) {
            *slot = item.as_f64().ok_or_else(bad)?;
        }
        Ok(out)
    }
}
