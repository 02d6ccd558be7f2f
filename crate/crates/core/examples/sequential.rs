//! Plain single-PE LOLCODE: loops, a switch with fallthrough and casts.
//! Pass a file path to run that instead.

const SOURCE: &str = r#"HAI 1.2
I HAS A total ITZ 0
IM IN YR count UPPIN YR i TIL BOTH SAEM i AN 5
  total R SUM OF total AN i
IM OUTTA YR count
VISIBLE "total " total

total, WTF?
OMG 10
  VISIBLE "ten, falling through"
OMG 11
  VISIBLE "ten or eleven"
  GTFO
OMGWTF
  VISIBLE "something else"
OIC

I HAS A half ITZ QUOSHUNT OF MAEK total A NUMBAR AN 4
VISIBLE "a quarter is " half ", truncated " MAEK half A NUMBR
KTHXBYE
"#;

fn main() {
    let source = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => SOURCE.to_string(),
    };
    let program = match frenz::compile(&source) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let result = frenz::spawn(&program, 1, 0);
    print!("{}", result.interleaved_text());
    if !result.is_success() {
        eprintln!("{:?}", result.outcome);
        std::process::exit(1);
    }
}
