mod common;

use std::fs;

use common::*;
use frenz::lexer::{tokenize, Keyword, TokenKind};
use frenz::pretty::{dump_tree, to_source};
use frenz::runtime::{spawn_with, Input, RunOptions};
use frenz::{compile, spawn};

fn all_programs() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for dir in [programs_dir(), programs_dir().join("seq")] {
        let mut entries: Vec<_> = fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "lol"))
            .collect();
        entries.sort();
        for p in entries {
            out.push((p.display().to_string(), fs::read_to_string(&p).unwrap()));
        }
    }
    out
}

#[test]
fn every_corpus_program_compiles() {
    let programs = all_programs();
    assert!(programs.len() >= 20);
    for (name, src) in programs {
        compile(&src).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn pretty_print_round_trips() {
    for (name, src) in all_programs() {
        let ast = compile(&src).unwrap();
        let printed = to_source(&ast);
        let again = compile(&printed).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(dump_tree(&ast), dump_tree(&again), "{name}");
        assert_eq!(
            to_source(&again),
            printed,
            "{name}: printing is not a fixed point"
        );
    }
}

#[test]
fn dump_is_stable_and_indented_by_two() {
    let src = program_source("nbody.lol");
    let a = dump_tree(&compile(&src).unwrap());
    let b = dump_tree(&compile(&src).unwrap());
    assert_eq!(a, b);
    for line in a.lines() {
        let indent = line.len() - line.trim_start_matches(' ').len();
        assert_eq!(indent % 2, 0, "{line:?}");
    }
}

#[test]
fn sequential_goldens() {
    let dir = programs_dir().join("seq");
    let mut count = 0;
    for (name, src) in all_programs()
        .into_iter()
        .filter(|(n, _)| n.contains("/seq/"))
    {
        let golden = dir.join(
            std::path::Path::new(&name)
                .with_extension("out")
                .file_name()
                .unwrap(),
        );
        let want = fs::read_to_string(&golden).unwrap();
        let r = spawn(&compile(&src).unwrap(), 1, 0);
        assert!(r.is_success(), "{name}: {:?}", r.outcome);
        assert_eq!(r.per_pe_text(), want, "{name}");
        count += 1;
    }
    assert!(count >= 10);
}

fn snippet(k: Keyword) -> &'static str {
    use Keyword::*;
    match k {
        Hai | Kthxbye | Visible => "VISIBLE 1",
        CanHas | Query => "CAN HAS STDIO?",
        Gimmeh => "I HAS A x\nGIMMEH x",
        IHasA | Itz => "I HAS A x ITZ 1",
        WeHasA | ItzA => "WE HAS A x ITZ A NUMBR",
        ItzSrslyA => "I HAS A x ITZ SRSLY A NUMBAR",
        ItzSrslyLotzA | TharIz | Numbars => "I HAS A a ITZ SRSLY LOTZ A NUMBARS AN THAR IZ 2",
        ImSharinIt => "WE HAS A x ITZ A NUMBR AN IM SHARIN IT",
        R => "I HAS A x\nx R 1",
        An | SumOf => "VISIBLE SUM OF 1 AN 2",
        AnStuff | Ttyl => "TXT MAH BFF 0 AN STUFF\nVISIBLE 1\nTTYL",
        BothSaem => "VISIBLE BOTH SAEM 1 AN 2",
        Diffrint => "VISIBLE DIFFRINT 1 AN 2",
        Bigger => "VISIBLE BIGGER 1 AN 2",
        Smallr => "VISIBLE SMALLR 1 AN 2",
        DiffOf => "VISIBLE DIFF OF 1 AN 2",
        ProduktOf => "VISIBLE PRODUKT OF 1 AN 2",
        QuoshuntOf => "VISIBLE QUOSHUNT OF 1 AN 2",
        ModOf => "VISIBLE MOD OF 1 AN 2",
        SquarOf => "VISIBLE SQUAR OF 2",
        UnsquarOf => "VISIBLE UNSQUAR OF 2",
        FlipOf => "VISIBLE FLIP OF 2",
        Maek | A | Yarn => "VISIBLE MAEK 1 A YARN",
        IsNowA | Troof => "I HAS A x ITZ 1\nx IS NOW A TROOF",
        Srs => "I HAS A x ITZ 1\nVISIBLE SRS \"x\"",
        ORly | YaRly | NoWai | Oic | Win => "WIN, O RLY?\nYA RLY, VISIBLE 1\nNO WAI, VISIBLE 2\nOIC",
        Wtf | Omg | Omgwtf | Gtfo => "1, WTF?\nOMG 1\nGTFO\nOMGWTF\nVISIBLE 2\nOIC",
        ImInYr | ImOuttaYr | UppinYr | Til => "IM IN YR l UPPIN YR i TIL BOTH SAEM i AN 2\nIM OUTTA YR l",
        NerfinYr | Wile => "IM IN YR l NERFIN YR i WILE BIGGER i AN -2\nIM OUTTA YR l",
        Fail => "VISIBLE FAIL",
        Noob => "VISIBLE NOOB",
        Numbr => "I HAS A x ITZ A NUMBR",
        Numbar => "I HAS A x ITZ A NUMBAR",
        Troofs => "I HAS A a ITZ SRSLY LOTZ A TROOFS AN THAR IZ 2",
        Numbrs => "I HAS A a ITZ SRSLY LOTZ A NUMBRS AN THAR IZ 2",
        Yarns => "I HAS A a ITZ SRSLY LOTZ A YARNS AN THAR IZ 2",
        Me => "VISIBLE ME",
        MahFrenz => "VISIBLE MAH FRENZ",
        Mah | Ur | TxtMahBff => "WE HAS A x ITZ A NUMBR\nTXT MAH BFF 0, MAH x R UR x",
        ImSrslyMesinWif | DunMesinWif => {
            "WE HAS A x ITZ A NUMBR AN IM SHARIN IT\nIM SRSLY MESIN WIF x\nDUN MESIN WIF x"
        }
        ImMesinWif => "WE HAS A x ITZ A NUMBR AN IM SHARIN IT\nIM MESIN WIF x, O RLY?\nYA RLY, DUN MESIN WIF x\nOIC",
        Hugz => "HUGZ",
        Whatevr => "VISIBLE WHATEVR",
        Whatevar => "VISIBLE WHATEVAR",
    }
}

#[test]
fn every_keyword_has_a_parsing_use() {
    for &k in Keyword::ALL {
        let src = format!("HAI 1.2\n{}\nKTHXBYE\n", snippet(k));
        let tokens = tokenize(&src).unwrap();
        assert!(
            tokens.iter().any(|t| t.kind == TokenKind::Keyword(k)),
            "{k:?} missing from its snippet"
        );
        let program = compile(&src).unwrap_or_else(|e| panic!("{k:?}: {e}"));
        let r = spawn_with(
            &program,
            1,
            &RunOptions {
                input: Input::Text("typed\n".into()),
                ..RunOptions::default()
            },
        );
        assert!(r.is_success(), "{k:?}: {:?}", r.outcome);
    }
}

#[test]
fn txn_is_an_alias() {
    let a = compile("HAI\nTXN MAH BFF 0, VISIBLE 1\nKTHXBYE").unwrap();
    let b = compile("HAI\nTXT MAH BFF 0, VISIBLE 1\nKTHXBYE").unwrap();
    assert_eq!(dump_tree(&a), dump_tree(&b));
}

#[test]
fn gimmeh_reads_lines_on_one_pe() {
    let src = "HAI\nI HAS A a\nI HAS A b\nGIMMEH a\nGIMMEH b\nVISIBLE b \"/\" a\nGIMMEH a\nVISIBLE \"[\" a \"]\"\nKTHXBYE";
    let r = spawn_with(
        &compile(src).unwrap(),
        1,
        &RunOptions {
            input: Input::Text("one\r\ntwo\n".into()),
            ..RunOptions::default()
        },
    );
    assert_eq!(r.outputs[0], vec!["two/one", "[]"]);
}
