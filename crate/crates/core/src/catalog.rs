//! Built-in subspaces used as fixtures and as the default input of the CLI.

use crate::subspace::SubspaceSpec;

const TWO_POINT: &str = r#"{"kind":"conditions","name":"two-point","points":[
    {"c":"0","functionals":[[{"order":1,"coeff":"1"}]]},
    {"c":"1","functionals":[[{"order":1,"coeff":"1"}]]}]}"#;

// f''(0) + f'(0) = 0 and f'(1) = 0
const MIXED: &str = r#"{"kind":"conditions","name":"mixed","points":[
    {"c":"0","functionals":[[{"order":2,"coeff":"1"},{"order":1,"coeff":"1"}]]},
    {"c":"1","functionals":[[{"order":1,"coeff":"1"}]]}]}"#;

pub fn catalog() -> Vec<SubspaceSpec> {
    let mono =
        |name: &str, gaps: &[u32]| SubspaceSpec::monomial(Some(name), gaps).expect("valid gaps");
    vec![
        SubspaceSpec::trivial(),
        mono("cusp", &[1]),
        mono("gaps-1-2", &[1, 2]),
        mono("gaps-1-3", &[1, 3]),
        mono("gaps-1-2-3", &[1, 2, 3]),
        SubspaceSpec::parse(TWO_POINT).expect("valid two-point spec"),
        SubspaceSpec::parse(MIXED).expect("valid mixed spec"),
    ]
}

pub fn lookup(name: &str) -> Option<SubspaceSpec> {
    catalog().into_iter().find(|s| s.name() == name)
}
