use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const FIVE_TAXA: &str = "((x1,x2)a,y,(z1,z2)c)b;\n";
const TWO_CYCLES: &str = "taxa: u w x y z\nsymbols: p q\n\
    u w x p\nu w y q\nu w z p\nu x y q\nu x z q\nu y z p\nw x y p\nw x z q\nw y z q\nx y z p\n";
const ONE_EDGE: &str = "taxa: u w x y z\nsymbols: p q\n\
    u w x q\nu w y p\nu w z p\nu x y p\nu x z p\nu y z p\nw x y q\nw x z q\nw y z p\nx y z p\n";

fn symtern(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_symtern"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn encode_writes_the_full_table() {
    let o = symtern(&["encode", "-"], FIVE_TAXA);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 12);
    assert!(out.starts_with("taxa: x1 x2 y z1 z2\nsymbols: a b c\n"));
    assert!(out.contains("x1 y z1 b\n"));

    let o = symtern(&["encode", "-"], "(x,y,z)a;");
    assert_eq!(stdout(&o), "taxa: x y z\nsymbols: a\nx y z a\n");
}

#[test]
fn encode_rejects_bad_trees() {
    assert_eq!(symtern(&["encode", "-"], "((x,y)a)b;").status.code(), Some(2));
    assert_eq!(symtern(&["encode", "-"], "((x,y),z,u)b;").status.code(), Some(2));
    assert_eq!(symtern(&["encode", "-"], "(x,y,z)a").status.code(), Some(3));
    let same = "((x,y)a,z,u)a;";
    assert_eq!(symtern(&["encode", "-"], same).status.code(), Some(0));
    let o = symtern(&["encode", "--require-discriminating", "-"], same);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn verify_exit_codes() {
    let table = stdout(&symtern(&["encode", "-"], FIVE_TAXA));
    let o = symtern(&["verify", "-"], &table);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");

    let o = symtern(&["verify", "-"], TWO_CYCLES);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "COND 4 SUBSET u w x y z DETAIL p:5 q:5\n");

    let missing: String = table.lines().take(11).map(|l| format!("{l}\n")).collect();
    assert_eq!(symtern(&["verify", "-"], &missing).status.code(), Some(3));
    assert_eq!(symtern(&["verify", "/nonexistent/table"], "").status.code(), Some(3));
}

#[test]
fn verify_star_reports_unresolved_sets() {
    let table = stdout(&symtern(&["encode", "-"], "((x1,x2)a,y,z1,z2)b;"));
    let o = symtern(&["verify", "--star", "-"], &table);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "COND * SUBSET x1 y z1 z2 DETAIL b:4\nCOND * SUBSET x2 y z1 z2 DETAIL b:4\n");
    let loose = symtern(&["verify", "--star", "--strict-star=false", "-"], &table);
    assert_eq!(stdout(&loose), stdout(&o));
}

#[test]
fn reconstruct_round_trip_and_trace() {
    let table = stdout(&symtern(&["encode", "-"], FIVE_TAXA));
    let o = symtern(&["reconstruct", "--trace", "-"], &table);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(((z1,z2)c,y)b,x1,x2)a;\n");
    assert_eq!(
        stderr(&o),
        "CONTRACT {x1,x2} -> @1 COLOR a\nCONTRACT {@1,y} -> @2 COLOR b\nCONTRACT {@2,z1,z2} -> @3 COLOR c\n"
    );
    let canonical = stdout(&symtern(&["encode", "-"], &stdout(&o)));
    assert_eq!(canonical, table);

    let constant = "taxa: a b c d\nsymbols: k\na b c k\na b d k\na c d k\nb c d k\n";
    assert_eq!(stdout(&symtern(&["reconstruct", "-"], constant)), "(a,b,c,d)k;\n");

    let o = symtern(&["reconstruct", "-"], TWO_CYCLES);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a metric"));
}

#[test]
fn reconstruct_writes_files() {
    let table = stdout(&symtern(&["encode", "-"], FIVE_TAXA));
    let (out, dot) = (scratch("tree.nwk"), scratch("tree.dot"));
    let o = symtern(&["reconstruct", "-", "--output", out.to_str().unwrap(), "--dot", dot.to_str().unwrap()], &table);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "(((z1,z2)c,y)b,x1,x2)a;\n");
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("graph tree {") && dot.matches(" -- ").count() == 7);
}

#[test]
fn quartet_listing() {
    let o = symtern(&["quartets", "-"], ONE_EDGE);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "u y | w x\nu z | w x\nw x | y z\n");

    let binary = stdout(&symtern(&["encode", "-"], FIVE_TAXA));
    assert_eq!(stdout(&symtern(&["quartets", "-"], &binary)).lines().count(), 5);
    let star = stdout(&symtern(&["encode", "-"], "(a,b,c,d,e)m;"));
    assert_eq!(stdout(&symtern(&["quartets", "-"], &star)), "");

    let bad = "taxa: x y z u\nsymbols: a b\nx y z a\nx y u a\nx z u a\ny z u b\n";
    let o = symtern(&["quartets", "-"], bad);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("COND 3"));
}

#[test]
fn check_binary_exit_codes() {
    let binary = stdout(&symtern(&["encode", "-"], FIVE_TAXA));
    let o = symtern(&["check-binary", "-"], &binary);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "binary\n".to_string()));
    let star = stdout(&symtern(&["encode", "-"], "(a,b,c,d,e)m;"));
    let o = symtern(&["check-binary", "-"], &star);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "not binary\n".to_string()));
    assert_eq!(symtern(&["check-binary", "--strict-star", "false", "-"], &star).status.code(), Some(1));
    assert_eq!(symtern(&["check-binary", "-"], TWO_CYCLES).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let a = symtern(&["encode", "-"], FIVE_TAXA);
    let b = symtern(&["encode", "-"], FIVE_TAXA);
    assert_eq!(a.stdout, b.stdout);
    let table = stdout(&a);
    let q1 = symtern(&["quartets", "-"], &table);
    let q2 = symtern(&["quartets", "-"], &table);
    assert_eq!(q1.stdout, q2.stdout);
}

#[test]
fn selftest_passes() {
    let o = symtern(&["selftest"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));
}
