//! Benchmark inputs shared by the criterion benches.

use fcat_core::fixtures;
use fcat_core::Presentation;

/// Named presentations of increasing size.
pub fn inputs() -> Vec<(String, Presentation)> {
    let mut out: Vec<(String, Presentation)> = fixtures::all()
        .into_iter()
        .filter(|(name, _)| *name != "fix-par")
        .map(|(name, p)| (name.to_string(), p))
        .collect();
    for n in [3, 5] {
        let chain: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let p = fixtures::truncated(&fixtures::preorder(n, &chain), 1).expect("preorder truncates");
        out.push((format!("chain-{n}"), p));
    }
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn inputs_are_valid() {
        for (name, p) in super::inputs() {
            assert!(!fcat_core::validate_presentation(&p).has_failures(), "{name}");
        }
    }
}
