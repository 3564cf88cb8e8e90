use proptest::prelude::*;

use odelab::parser::parse_field;

fn literal() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u32..1000).prop_map(|p| p.to_string()),
        (0u32..100, 1u32..50).prop_map(|(p, q)| format!("{p}/{q}")),
        (0u32..100, 0u32..1000).prop_map(|(a, b)| format!("{a}.{b:03}")),
        (1u32..10, -3i32..3).prop_map(|(m, e)| format!("{m}e{e}")),
    ]
}

fn term() -> impl Strategy<Value = String> {
    prop_oneof![
        literal(),
        (literal(), 0usize..8).prop_map(|(c, k)| format!("{c}*z^{k}")),
        (literal()).prop_map(|c| format!("{c} * z")),
        Just("z".to_string()),
        (1usize..8).prop_map(|k| format!("z^{k}")),
    ]
}

fn field_text() -> impl Strategy<Value = String> {
    (
        prop::bool::ANY,
        term(),
        prop::collection::vec((prop::bool::ANY, term()), 0..6),
    )
        .prop_map(|(neg, first, rest)| {
            let mut s = if neg { format!("-{first}") } else { first };
            for (minus, t) in rest {
                s.push_str(if minus { " - " } else { " + " });
                s.push_str(&t);
            }
            s
        })
}

proptest! {
    #[test]
    fn printed_fields_reparse_identically(text in field_text()) {
        let field = parse_field(&text).unwrap();
        let printed = field.to_string();
        prop_assert_eq!(parse_field(&printed).unwrap(), field, "{} printed as {}", text, printed);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "[-+*/^. z0-9eE]{0,24}") {
        let _ = parse_field(&text);
    }
}
