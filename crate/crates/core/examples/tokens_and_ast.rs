//! Shows the front end on a small program: the token stream, the tree dump
//! and the canonical source it prints back to.

use frenz::lexer::tokenize;
use frenz::pretty::{dump_tree, to_source};

const SOURCE: &str = "HAI 1.2
WE HAS A x ITZ SRSLY A NUMBR AN IM SHARIN IT
TXT MAH BFF 0, IM SRSLY MESIN WIF UR x
I HAS A y ITZ SUM OF ...
  ME AN 2
VISIBLE \"y is \" y
KTHXBYE
";

fn main() {
    println!("-- tokens");
    for t in tokenize(SOURCE).expect("lexes") {
        println!(
            "{:<24} {:<28} {}",
            t.kind.label(),
            format!("{:?}", t.text),
            t.span
        );
    }
    let program = frenz::compile(SOURCE).expect("parses");
    println!("\n-- tree\n{}", dump_tree(&program));
    println!("-- printed back\n{}", to_source(&program));
}
