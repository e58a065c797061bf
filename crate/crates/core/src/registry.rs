//! Name-keyed registries for the interchangeable strategies of the pipeline.
//!
//! Three families are registered at startup:
//!
//! | family              | trait                                   | names               |
//! |---------------------|-----------------------------------------|---------------------|
//! | derivative backend  | [`DerivativeBackend`]                   | `spectral`, `fd2`   |
//! | Jacobian mode       | [`JacobianMode`]                        | `exact`, `shifted` |
//! | group case adapter  | [`CaseAdapter`]                         | `nil_yt`, `sol_r`   |
//!
//! Lookups are by the same strings that appear in config files and on the
//! command line, so a config never has to know about concrete types.

use std::sync::{Arc, LazyLock, RwLock};

use crate::error::{Error, Result};
use crate::grid::backend::{DerivativeBackend, FiniteDifference2, Spectral};
use crate::reconstruct::adapter::{CaseAdapter, NilAdapter, SolAdapter};
use crate::solver::jacobian::{ExactJacobian, JacobianMode, ShiftedJacobian};

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: RwLock<Vec<(String, Arc<T>)>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: RwLock::new(Vec::new()),
        }
    }

    /// Registers `item` under `name`, replacing any previous entry of that name.
    pub fn register(&self, name: impl Into<String>, item: Arc<T>) {
        let name = name.into();
        let mut entries = self.entries.write().unwrap();
        match entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = item,
            None => entries.push((name, item)),
        }
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        let entries = self.entries.read().unwrap();
        entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, item)| Arc::clone(item))
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: entries
                    .iter()
                    .map(|(n, _)| n.as_str())
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries
            .read()
            .unwrap()
            .iter()
            .map(|(n, _)| n.clone())
            .collect()
    }
}

static BACKENDS: LazyLock<Registry<dyn DerivativeBackend>> = LazyLock::new(|| {
    let r = Registry::new("derivative backend");
    r.register("spectral", Arc::new(Spectral::new()) as Arc<dyn DerivativeBackend>);
    r.register("fd2", Arc::new(FiniteDifference2) as Arc<dyn DerivativeBackend>);
    r
});

static JACOBIANS: LazyLock<Registry<dyn JacobianMode>> = LazyLock::new(|| {
    let r = Registry::new("jacobian mode");
    r.register("exact", Arc::new(ExactJacobian) as Arc<dyn JacobianMode>);
    r.register("shifted", Arc::new(ShiftedJacobian) as Arc<dyn JacobianMode>);
    r
});

static CASES: LazyLock<Registry<dyn CaseAdapter>> = LazyLock::new(|| {
    let r = Registry::new("group case");
    r.register("nil_yt", Arc::new(NilAdapter) as Arc<dyn CaseAdapter>);
    r.register("sol_r", Arc::new(SolAdapter) as Arc<dyn CaseAdapter>);
    r
});

pub fn backends() -> &'static Registry<dyn DerivativeBackend> {
    &BACKENDS
}

pub fn jacobian_modes() -> &'static Registry<dyn JacobianMode> {
    &JACOBIANS
}

pub fn cases() -> &'static Registry<dyn CaseAdapter> {
    &CASES
}

pub fn backend(name: &str) -> Result<Arc<dyn DerivativeBackend>> {
    BACKENDS.get(name)
}

pub fn jacobian_mode(name: &str) -> Result<Arc<dyn JacobianMode>> {
    JACOBIANS.get(name)
}

pub fn case_adapter(name: &str) -> Result<Arc<dyn CaseAdapter>> {
    CASES.get(name)
}
