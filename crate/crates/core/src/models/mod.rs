//! Library of benchmark systems, addressable by name.
//!
//! [`catalog`] lists every model with its parameters, defaults and supported
//! methods; [`build_model`] constructs one from a parameter map.

mod arch;
pub(crate) mod bounds;
mod heat;
mod quadrotor;
mod simple;
mod single_track;
mod traffic;

use std::collections::BTreeMap;
use std::fmt;

pub use arch::{
    arch_quadrotor_operating_box, laub_loomis_operating_box, make_arch_quadrotor, make_arch_quadrotor_on,
    make_laub_loomis, make_laub_loomis_on, ArchQuadrotorParams,
};
pub use heat::{make_heat3d, HeatParams};
pub use quadrotor::{
    apf_force, make_quadrotor_apf, make_quadrotor_swarm, ApfParams, QuadrotorParams, QUAD_INPUTS, QUAD_STATES,
};
pub use simple::{make_scalar_linear, make_vdp, make_vdp_on, make_zero, vdp_operating_box};
pub use single_track::{
    make_single_track, make_single_track_on, single_track_operating_box, SingleTrackParams, KINEMATIC_SPEED,
};
pub use traffic::{make_traffic, TrafficParams};

use crate::error::{Error, Result};
use crate::reach::Method;
use crate::system::SystemModel;

/// Where a default parameter value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Published with the model.
    Published,
    /// Taken from the benchmark suite that defines the model.
    Benchmark,
    /// Chosen for this library; override as needed.
    ImplementerChosen,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::Benchmark => "benchmark",
            Provenance::ImplementerChosen => "implementer-chosen",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub integer: bool,
    pub provenance: Provenance,
    pub description: &'static str,
}

const fn real(name: &'static str, default: f64, provenance: Provenance, description: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default,
        integer: false,
        provenance,
        description,
    }
}

const fn int(name: &'static str, default: f64, provenance: Provenance, description: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default,
        integer: true,
        provenance,
        description,
    }
}

/// How a scalable model's size parameter follows a requested state dimension.
#[derive(Clone, Copy, Debug)]
pub struct Scaling {
    pub param: &'static str,
    /// Size parameter for a requested state dimension `n`.
    pub from_dim: fn(usize) -> usize,
}

#[derive(Clone, Copy, Debug)]
pub struct ModelCatalogEntry {
    pub name: &'static str,
    pub dimension: &'static str,
    pub inputs: &'static str,
    pub params: &'static [ParamSpec],
    pub methods: &'static [Method],
    pub operating_box: &'static str,
    pub scaling: Option<Scaling>,
    build: fn(&Params) -> Result<SystemModel>,
}

impl ModelCatalogEntry {
    pub fn supports(&self, method: Method) -> bool {
        self.methods.contains(&method)
    }

    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn build(&self, overrides: &BTreeMap<String, f64>) -> Result<SystemModel> {
        let params = Params::resolve(self, overrides)?;
        (self.build)(&params)
    }
}

/// Parameter values after defaults are filled in.
pub struct Params {
    values: BTreeMap<&'static str, f64>,
}

impl Params {
    fn resolve(entry: &ModelCatalogEntry, overrides: &BTreeMap<String, f64>) -> Result<Params> {
        if let Some(unknown) = overrides.keys().find(|k| entry.param(k).is_none()) {
            let known: Vec<&str> = entry.params.iter().map(|p| p.name).collect();
            return Err(Error::InvalidParameter(format!(
                "model '{}' has no parameter '{unknown}' (known: {})",
                entry.name,
                if known.is_empty() { "none".to_string() } else { known.join(", ") }
            )));
        }
        let mut values = BTreeMap::new();
        for spec in entry.params {
            let v = overrides.get(spec.name).copied().unwrap_or(spec.default);
            if !v.is_finite() || (spec.integer && (v.fract() != 0.0 || v < 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "parameter {} = {v} must be a {}",
                    spec.name,
                    if spec.integer { "nonnegative integer" } else { "finite number" }
                )));
            }
            values.insert(spec.name, v);
        }
        Ok(Params { values })
    }

    fn get(&self, name: &str) -> f64 {
        self.values[name]
    }

    fn count(&self, name: &str) -> usize {
        self.values[name] as usize
    }
}

use Provenance::{Benchmark, ImplementerChosen, Published};

const ALL: &[Method] = &[Method::GrowthBound, Method::MixedMonotonicity, Method::MonteCarlo];
const GB_MC: &[Method] = &[Method::GrowthBound, Method::MonteCarlo];

const TRAFFIC_PARAMS: &[ParamSpec] = &[
    int("n", 50.0, ImplementerChosen, "number of segments (>= 3)"),
    real("v", 0.5, ImplementerChosen, "free-flow speed"),
    real("w", 1.0 / 6.0, ImplementerChosen, "congestion wave speed"),
    real("c", 40.0, ImplementerChosen, "segment capacity"),
    real("x_bar", 320.0, ImplementerChosen, "jam density"),
    real("T", 30.0, ImplementerChosen, "time constant"),
    real("beta", 0.75, ImplementerChosen, "fraction of flow staying on the highway"),
];

const QUAD_PARAMS: &[ParamSpec] = &[
    int("K", 1.0, ImplementerChosen, "number of quadrotors"),
    real("F", 1.4 * 9.81, ImplementerChosen, "thrust"),
    real("m", 1.4, ImplementerChosen, "mass"),
    real("g", 9.81, ImplementerChosen, "gravity"),
    real("Jx", 0.054, ImplementerChosen, "roll inertia"),
    real("Jy", 0.054, ImplementerChosen, "pitch inertia"),
    real("Jz", 0.104, ImplementerChosen, "yaw inertia"),
];

const APF_PARAMS: &[ParamSpec] = &[
    int("K", 4.0, ImplementerChosen, "number of quadrotors (>= 2)"),
    real("F", 1.4 * 9.81, ImplementerChosen, "thrust"),
    real("m", 1.4, ImplementerChosen, "mass"),
    real("g", 9.81, ImplementerChosen, "gravity"),
    real("Jx", 0.054, ImplementerChosen, "roll inertia"),
    real("Jy", 0.054, ImplementerChosen, "pitch inertia"),
    real("Jz", 0.104, ImplementerChosen, "yaw inertia"),
    real("F_r", 1.0, ImplementerChosen, "repulsion gain"),
    real("F_a", 0.1, ImplementerChosen, "attraction gain"),
];

const SINGLE_TRACK_PARAMS: &[ParamSpec] = &[
    real("l_wb", 2.5789, Published, "wheelbase"),
    real("m", 1093.3, Published, "mass"),
    real("mu", 1.0489, Published, "friction coefficient"),
    real("l_f", 1.156, Published, "front axle to center of gravity"),
    real("l_r", 1.422, Published, "rear axle to center of gravity"),
    real("h_cg", 0.6137, Published, "center of gravity height"),
    real("I_z", 1791.6, Published, "yaw moment of inertia"),
    real("C_Sf", 20.89, Published, "front cornering stiffness"),
    real("C_Sr", 20.89, Published, "rear cornering stiffness"),
    real("g", 9.81, Benchmark, "gravity"),
    real("steer_min", -0.910, Benchmark, "minimum steering angle"),
    real("steer_max", 0.910, Benchmark, "maximum steering angle"),
    real("steer_rate_min", -0.4, Benchmark, "minimum steering rate"),
    real("steer_rate_max", 0.4, Benchmark, "maximum steering rate"),
    real("v_min", -13.6, Benchmark, "minimum velocity"),
    real("v_max", 50.8, Benchmark, "maximum velocity"),
    real("v_switch", 7.319, Benchmark, "velocity above which the acceleration limit drops"),
    real("a_max", 11.5, Benchmark, "maximum acceleration"),
];

const ARCH_QUAD_PARAMS: &[ParamSpec] = &[
    real("g", 9.81, Benchmark, "gravity"),
    real("m", 1.4, Benchmark, "mass"),
    real("Jx", 0.054, Benchmark, "roll inertia"),
    real("Jy", 0.054, Benchmark, "pitch inertia"),
    real("Jz", 0.104, Benchmark, "yaw inertia"),
];

fn quad_params(p: &Params) -> QuadrotorParams {
    QuadrotorParams {
        k: p.count("K"),
        thrust: p.get("F"),
        mass: p.get("m"),
        g: p.get("g"),
        jx: p.get("Jx"),
        jy: p.get("Jy"),
        jz: p.get("Jz"),
    }
}

fn cube_root(n: usize) -> usize {
    let mut l = (n as f64).cbrt().round() as usize;
    while l > 2 && l * l * l > n {
        l -= 1;
    }
    l.max(2)
}

static CATALOG: &[ModelCatalogEntry] = &[
    ModelCatalogEntry {
        name: "zero",
        dimension: "n",
        inputs: "0",
        params: &[int("n", 1.0, ImplementerChosen, "state dimension")],
        methods: ALL,
        operating_box: "whole state space",
        scaling: Some(Scaling { param: "n", from_dim: |n| n }),
        build: |p| make_zero(p.count("n")),
    },
    ModelCatalogEntry {
        name: "scalar-linear",
        dimension: "1",
        inputs: "1 (additive)",
        params: &[real("a", 1.0, ImplementerChosen, "rate in x' = a x + p")],
        methods: ALL,
        operating_box: "whole state space",
        scaling: None,
        build: |p| make_scalar_linear(p.get("a")),
    },
    ModelCatalogEntry {
        name: "vdp",
        dimension: "2",
        inputs: "0",
        params: &[real("mu", 1.0, Benchmark, "damping")],
        methods: GB_MC,
        operating_box: "x in [1.1, 2.4], y in [-0.2, 2.7]",
        scaling: None,
        build: |p| make_vdp(p.get("mu")),
    },
    ModelCatalogEntry {
        name: "laub-loomis",
        dimension: "7",
        inputs: "0",
        params: &[],
        methods: GB_MC,
        operating_box: "x1 [0.9,1.6] x2 [0.75,1.3] x3 [0.25,1.65] x4 [1.6,2.6] x5 [0.25,1.15] x6 [-0.05,0.25] x7 [0.05,0.6]",
        scaling: None,
        build: |_| make_laub_loomis(),
    },
    ModelCatalogEntry {
        name: "arch-quadrotor",
        dimension: "12",
        inputs: "0 (controller closed)",
        params: ARCH_QUAD_PARAMS,
        methods: GB_MC,
        operating_box: "x1,x2 [-1,1] x3 [-0.5,1.4] x4,x5 [-0.5,0.5] x6 [-2.5,0.6] angles and rates [-0.05,0.05]",
        scaling: None,
        build: |p| {
            make_arch_quadrotor(ArchQuadrotorParams {
                g: p.get("g"),
                m: p.get("m"),
                jx: p.get("Jx"),
                jy: p.get("Jy"),
                jz: p.get("Jz"),
            })
        },
    },
    ModelCatalogEntry {
        name: "traffic",
        dimension: "n",
        inputs: "1 (inflow to segment 0)",
        params: TRAFFIC_PARAMS,
        methods: ALL,
        operating_box: "whole state space",
        scaling: Some(Scaling { param: "n", from_dim: |n| n.max(3) }),
        build: |p| {
            make_traffic(TrafficParams {
                n: p.count("n"),
                v: p.get("v"),
                w: p.get("w"),
                c: p.get("c"),
                x_bar: p.get("x_bar"),
                t_c: p.get("T"),
                beta: p.get("beta"),
            })
        },
    },
    ModelCatalogEntry {
        name: "quadrotor-swarm",
        dimension: "12 K",
        inputs: "3 K (torques)",
        params: QUAD_PARAMS,
        methods: GB_MC,
        operating_box: "whole state space",
        scaling: Some(Scaling { param: "K", from_dim: |n| (n / QUAD_STATES).max(1) }),
        build: |p| make_quadrotor_swarm(quad_params(p)),
    },
    ModelCatalogEntry {
        name: "quadrotor-apf",
        dimension: "12 K",
        inputs: "3 K (torques)",
        params: APF_PARAMS,
        methods: GB_MC,
        operating_box: "whole state space",
        scaling: Some(Scaling { param: "K", from_dim: |n| (n / QUAD_STATES).max(2) }),
        build: |p| {
            make_quadrotor_apf(
                quad_params(p),
                ApfParams {
                    f_r: p.get("F_r"),
                    f_a: p.get("F_a"),
                },
            )
        },
    },
    ModelCatalogEntry {
        name: "heat3d",
        dimension: "l^3",
        inputs: "0",
        params: &[
            int("l", 8.0, ImplementerChosen, "grid points per axis (>= 2)"),
            real("alpha", 1.0, ImplementerChosen, "diffusivity"),
            real("h_exchange", 1.0, ImplementerChosen, "heat exchange coefficient of the top face"),
        ],
        methods: ALL,
        operating_box: "whole state space",
        scaling: Some(Scaling { param: "l", from_dim: cube_root }),
        build: |p| {
            make_heat3d(HeatParams {
                l: p.count("l"),
                alpha: p.get("alpha"),
                h_exchange: p.get("h_exchange"),
            })
        },
    },
    ModelCatalogEntry {
        name: "single-track",
        dimension: "7",
        inputs: "2 (steering rate, acceleration; growth bound needs a point input box)",
        params: SINGLE_TRACK_PARAMS,
        methods: GB_MC,
        operating_box: "x3 [-0.05,0.05] x4 [14,16.5] x5 [-0.1,0.2] x6 [-0.1,0.25] x7 [-0.05,0.05], p1 [-0.1,0.1] p2 [-1,1]",
        scaling: None,
        build: |p| {
            make_single_track(SingleTrackParams {
                l_wb: p.get("l_wb"),
                m: p.get("m"),
                mu: p.get("mu"),
                l_f: p.get("l_f"),
                l_r: p.get("l_r"),
                h_cg: p.get("h_cg"),
                i_z: p.get("I_z"),
                c_sf: p.get("C_Sf"),
                c_sr: p.get("C_Sr"),
                g: p.get("g"),
                steer_min: p.get("steer_min"),
                steer_max: p.get("steer_max"),
                steer_rate_min: p.get("steer_rate_min"),
                steer_rate_max: p.get("steer_rate_max"),
                v_min: p.get("v_min"),
                v_max: p.get("v_max"),
                v_switch: p.get("v_switch"),
                a_max: p.get("a_max"),
            })
        },
    },
];

pub fn catalog() -> &'static [ModelCatalogEntry] {
    CATALOG
}

pub fn entry(name: &str) -> Result<&'static ModelCatalogEntry> {
    CATALOG.iter().find(|e| e.name == name).ok_or_else(|| {
        let names: Vec<&str> = CATALOG.iter().map(|e| e.name).collect();
        Error::InvalidModel(format!("unknown model '{name}' (available: {})", names.join(", ")))
    })
}

/// Builds a library model from its name and parameter overrides.
pub fn build_model(name: &str, params: &BTreeMap<String, f64>) -> Result<SystemModel> {
    entry(name)?.build(params)
}
