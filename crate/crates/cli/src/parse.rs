//! Parsers for the small textual arguments of the subcommands.

use krein_photon::{Error, Result, Sl2c};

/// Exactly `N` comma-separated numbers.
pub fn numbers<const N: usize>(text: &str, what: &str) -> Result<[f64; N]> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Config(format!("{what} {text:?}: {e}")))?;
    values.try_into().map_err(|v: Vec<f64>| {
        Error::Config(format!(
            "{what} {text:?}: expected {N} numbers, got {}",
            v.len()
        ))
    })
}

/// `x`, `y`, `z` or a comma-separated direction.
pub fn axis(text: &str) -> Result<[f64; 3]> {
    match text.trim() {
        "x" => Ok([1.0, 0.0, 0.0]),
        "y" => Ok([0.0, 1.0, 0.0]),
        "z" => Ok([0.0, 0.0, 1.0]),
        other => numbers::<3>(other, "axis"),
    }
}

/// A product of factors `boost:axis:rapidity` or `rotation:axis:angle`,
/// separated by `*` and multiplied left to right. `identity` is accepted.
pub fn group_element(text: &str) -> Result<Sl2c> {
    let mut acc = Sl2c::identity();
    for factor in text.split('*') {
        let factor = factor.trim();
        if factor == "identity" {
            continue;
        }
        let parts: Vec<&str> = factor.split(':').collect();
        let [kind, ax, value] = parts[..] else {
            return Err(Error::Config(format!(
                "group factor {factor:?} is not of the form kind:axis:parameter"
            )));
        };
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| Error::Config(format!("group factor {factor:?}: {e}")))?;
        let element = match kind.trim() {
            "boost" => Sl2c::boost(axis(ax)?, value)?,
            "rotation" => Sl2c::rotation(axis(ax)?, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown group factor {other:?} (boost, rotation)"
                )))
            }
        };
        acc = acc * element;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numbers_and_axes() {
        assert_eq!(
            numbers::<4>("1, -2,3e-1,0", "x").unwrap(),
            [1.0, -2.0, 0.3, 0.0]
        );
        assert!(numbers::<3>("1,2", "p").is_err());
        assert!(numbers::<3>("1,a,2", "p").is_err());
        assert_eq!(axis("y").unwrap(), [0.0, 1.0, 0.0]);
        assert_eq!(axis("1,1,0").unwrap(), [1.0, 1.0, 0.0]);
    }

    #[test]
    fn parses_group_products() {
        let g = group_element("boost:z:0.7*rotation:x:0.3").unwrap();
        let want = Sl2c::boost([0.0, 0.0, 1.0], 0.7).unwrap()
            * Sl2c::rotation([1.0, 0.0, 0.0], 0.3).unwrap();
        assert_eq!(g, want);
        assert_eq!(group_element("identity").unwrap(), Sl2c::identity());
        assert!(matches!(group_element("shear:z:1"), Err(Error::Config(_))));
        assert!(matches!(group_element("boost:z"), Err(Error::Config(_))));
    }
}
