use std::fmt;

use serde::Serialize;

use crate::orbifold::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub holds: bool,
}

/// Named quantities and checked claims for one worked example, in the order
/// they were produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub quantities: Vec<Quantity>,
    pub claims: Vec<Claim>,
}

impl ExampleReport {
    pub fn new(name: &str) -> Self {
        ExampleReport { name: name.into(), params: Vec::new(), quantities: Vec::new(), claims: Vec::new() }
    }

    pub fn param(&mut self, name: &str, value: impl fmt::Display) -> &mut Self {
        self.params.push((name.into(), value.to_string()));
        self
    }

    pub fn quantity(&mut self, name: &str, value: Rational) -> &mut Self {
        self.quantities.push(Quantity { name: name.into(), value });
        self
    }

    pub fn claim(&mut self, claim: &str, holds: bool) -> &mut Self {
        self.claims.push(Claim { claim: claim.into(), holds });
        self
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.quantities.iter().find(|q| q.name == name).map(|q| &q.value)
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    pub fn merge(&mut self, other: ExampleReport) {
        self.quantities.extend(other.quantities);
        self.claims.extend(other.claims);
    }
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        for q in &self.quantities {
            writeln!(f, "  {:<36} {}", q.name, q.value)?;
        }
        for c in &self.claims {
            writeln!(f, "  [{}] {}", if c.holds { "pass" } else { "FAIL" }, c.claim)?;
        }
        Ok(())
    }
}
