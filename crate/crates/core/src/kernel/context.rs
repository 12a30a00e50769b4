use alloc::collections::BTreeMap;
use alloc::string::String;

use super::types::{SortEnv, Type};
use super::typing::TypeError;

/// Typed constants and free variables over a sort environment.
///
/// The constant and variable namespaces are kept disjoint.
#[derive(Debug, Clone)]
pub struct Context {
    sorts: SortEnv,
    constants: BTreeMap<String, Type>,
    variables: BTreeMap<String, Type>,
}

impl Context {
    pub fn new(sorts: SortEnv) -> Context {
        Context { sorts, constants: BTreeMap::new(), variables: BTreeMap::new() }
    }

    pub fn sorts(&self) -> &SortEnv {
        &self.sorts
    }

    pub fn constant(&self, name: &str) -> Option<&Type> {
        self.constants.get(name)
    }

    pub fn variable(&self, name: &str) -> Option<&Type> {
        self.variables.get(name)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&String, &Type)> {
        self.constants.iter()
    }

    pub fn variables(&self) -> impl Iterator<Item = (&String, &Type)> {
        self.variables.iter()
    }

    pub fn declare_constant(&mut self, name: impl Into<String>, ty: Type) -> Result<(), TypeError> {
        let name = name.into();
        self.check_fresh(&name, &ty)?;
        self.constants.insert(name, ty);
        Ok(())
    }

    pub fn declare_variable(&mut self, name: impl Into<String>, ty: Type) -> Result<(), TypeError> {
        let name = name.into();
        self.check_fresh(&name, &ty)?;
        self.variables.insert(name, ty);
        Ok(())
    }

    fn check_fresh(&self, name: &str, ty: &Type) -> Result<(), TypeError> {
        if self.constants.contains_key(name) || self.variables.contains_key(name) {
            return Err(TypeError::Redeclared(name.into()));
        }
        if let Some(sort) = self.sorts.undeclared_in(ty) {
            return Err(TypeError::UnknownSort(sort));
        }
        Ok(())
    }
}
