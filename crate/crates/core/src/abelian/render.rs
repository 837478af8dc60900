//! Text grammar for groups: `Z^r (+) Z/t1 (+) ... (+) Z/tm`, or `0`.

use num_bigint::BigInt;
use num_traits::One;

use super::group::FgAbGroup;
use super::AbelianError;

pub const SUM: &str = " (+) ";

pub fn render_group(g: &FgAbGroup) -> String {
    let mut terms = Vec::new();
    match g.free_rank() {
        0 => {}
        1 => terms.push("Z".to_string()),
        r => terms.push(format!("Z^{r}")),
    }
    terms.extend(g.torsion().iter().map(|t| format!("Z/{t}")));
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(SUM)
    }
}

/// Splits a direct-sum expression into trimmed summands. Accepts `(+)` and `⊕`.
pub(crate) fn split_summands(s: &str) -> Vec<&str> {
    s.split("(+)").flat_map(|part| part.split('⊕')).map(str::trim).collect()
}

pub(crate) fn parse_exponent(s: &str, whole: &str) -> Result<usize, AbelianError> {
    s.trim().parse().map_err(|_| AbelianError::Parse(format!("bad exponent in {whole:?}")))
}

/// Parses the group grammar; non-canonical inputs such as `Z/2 (+) Z/3` are
/// canonicalized. `Z/t^k` is shorthand for `k` copies.
pub fn parse_group(s: &str) -> Result<FgAbGroup, AbelianError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(AbelianError::Parse("empty group expression".into()));
    }
    let mut free = 0usize;
    let mut orders: Vec<BigInt> = Vec::new();
    for term in split_summands(s) {
        if term == "0" || term == "{0}" {
            continue;
        }
        if let Some(rest) = term.strip_prefix("Z/") {
            let (order, copies) = match rest.split_once('^') {
                Some((o, k)) => (o, parse_exponent(k, s)?),
                None => (rest, 1),
            };
            let order: BigInt = order
                .trim()
                .parse()
                .map_err(|_| AbelianError::Parse(format!("bad cyclic order in {s:?}")))?;
            if order < BigInt::one() {
                return Err(AbelianError::Parse(format!("cyclic order must be positive in {s:?}")));
            }
            orders.extend(std::iter::repeat_n(order, copies));
        } else if term == "Z" {
            free += 1;
        } else if let Some(k) = term.strip_prefix("Z^") {
            free += parse_exponent(k, s)?;
        } else {
            return Err(AbelianError::Parse(format!("unrecognized summand {term:?} in {s:?}")));
        }
    }
    Ok(FgAbGroup::from_cyclic_orders(free, &orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_canonical_forms() {
        assert_eq!(render_group(&FgAbGroup::trivial()), "0");
        assert_eq!(render_group(&FgAbGroup::free(1)), "Z");
        assert_eq!(render_group(&FgAbGroup::free(3)), "Z^3");
        let g = FgAbGroup::from_cyclic_orders(2, &[BigInt::from(2), BigInt::from(4)]);
        assert_eq!(render_group(&g), "Z^2 (+) Z/2 (+) Z/4");
    }

    #[test]
    fn parses_shorthand_and_merges() {
        assert_eq!(parse_group("Z/4^2").unwrap().to_string(), "Z/4 (+) Z/4");
        assert_eq!(parse_group("Z/2 (+) Z/3").unwrap().to_string(), "Z/6");
        assert_eq!(parse_group("Z ⊕ Z/2").unwrap().to_string(), "Z (+) Z/2");
        assert_eq!(parse_group("Z/1").unwrap(), FgAbGroup::trivial());
        assert_eq!(parse_group("{0}").unwrap(), FgAbGroup::trivial());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_group("").is_err());
        assert!(parse_group("Q").is_err());
        assert!(parse_group("Z/0").is_err());
        assert!(parse_group("Z^x").is_err());
    }
}
