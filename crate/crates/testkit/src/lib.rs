//! Test support: a tiny class-file assembler and fixture archive writer.
//!
//! The sandboxes this project is tested in do not always ship a JDK, so
//! fixture classes are assembled directly. The output is structurally valid
//! (parsable) but is not run through a bytecode verifier.

pub mod oracle;

use std::collections::HashMap;
use std::io::{Cursor, Write};
use std::path::Path;

use zip::write::SimpleFileOptions;

pub const ACC_PUBLIC: u16 = 0x0001;
pub const ACC_PRIVATE: u16 = 0x0002;
pub const ACC_STATIC: u16 = 0x0008;
pub const ACC_SUPER: u16 = 0x0020;
pub const ACC_INTERFACE: u16 = 0x0200;
pub const ACC_ABSTRACT: u16 = 0x0400;

#[derive(Default)]
struct Pool {
    bytes: Vec<u8>,
    next: u16,
    dedup: HashMap<Vec<u8>, u16>,
}

impl Pool {
    fn new() -> Self {
        Pool {
            next: 1,
            ..Default::default()
        }
    }

    fn push(&mut self, entry: Vec<u8>) -> u16 {
        if let Some(&i) = self.dedup.get(&entry) {
            return i;
        }
        let index = self.next;
        self.next += if matches!(entry[0], 5 | 6) { 2 } else { 1 };
        self.bytes.extend_from_slice(&entry);
        self.dedup.insert(entry, index);
        index
    }

    fn utf8(&mut self, s: &str) -> u16 {
        let mut e = vec![1];
        e.extend_from_slice(&(s.len() as u16).to_be_bytes());
        e.extend_from_slice(s.as_bytes());
        self.push(e)
    }

    fn pair(&mut self, tag: u8, a: u16, b: u16) -> u16 {
        let mut e = vec![tag];
        e.extend_from_slice(&a.to_be_bytes());
        e.extend_from_slice(&b.to_be_bytes());
        self.push(e)
    }

    fn class(&mut self, name: &str) -> u16 {
        let n = self.utf8(name);
        let mut e = vec![7];
        e.extend_from_slice(&n.to_be_bytes());
        self.push(e)
    }

    fn member(&mut self, tag: u8, owner: &str, name: &str, desc: &str) -> u16 {
        let c = self.class(owner);
        let n = self.utf8(name);
        let d = self.utf8(desc);
        let nat = self.pair(12, n, d);
        self.pair(tag, c, nat)
    }
}

struct MethodDef {
    access: u16,
    name: u16,
    desc: u16,
    code: Option<Vec<u8>>,
}

/// Assembles one class file.
pub struct ClassBuilder {
    pool: Pool,
    access: u16,
    this_class: u16,
    super_class: u16,
    major: u16,
    fields: Vec<(u16, u16, u16)>,
    methods: Vec<MethodDef>,
    code_attr: u16,
}

impl ClassBuilder {
    /// `name` is the internal binary name, e.g. `sample/ClassA`.
    pub fn new(name: &str) -> Self {
        let mut pool = Pool::new();
        let this_class = pool.class(name);
        let super_class = pool.class("java/lang/Object");
        let code_attr = pool.utf8("Code");
        ClassBuilder {
            pool,
            access: ACC_PUBLIC | ACC_SUPER,
            this_class,
            super_class,
            major: 52,
            fields: Vec::new(),
            methods: Vec::new(),
            code_attr,
        }
    }

    pub fn interface(mut self) -> Self {
        self.access = ACC_PUBLIC | ACC_INTERFACE | ACC_ABSTRACT;
        self
    }

    pub fn major_version(mut self, major: u16) -> Self {
        self.major = major;
        self
    }

    pub fn method_ref(&mut self, owner: &str, name: &str, desc: &str) -> u16 {
        self.pool.member(10, owner, name, desc)
    }

    pub fn interface_method_ref(&mut self, owner: &str, name: &str, desc: &str) -> u16 {
        self.pool.member(11, owner, name, desc)
    }

    pub fn field_ref(&mut self, owner: &str, name: &str, desc: &str) -> u16 {
        self.pool.member(9, owner, name, desc)
    }

    pub fn class_ref(&mut self, name: &str) -> u16 {
        self.pool.class(name)
    }

    pub fn long_constant(&mut self, value: i64) -> u16 {
        let mut e = vec![5];
        e.extend_from_slice(&value.to_be_bytes());
        self.pool.push(e)
    }

    pub fn field(&mut self, access: u16, name: &str, desc: &str) {
        let n = self.pool.utf8(name);
        let d = self.pool.utf8(desc);
        self.fields.push((access, n, d));
    }

    /// Adds a method; `code = None` makes it abstract/native.
    pub fn method(&mut self, access: u16, name: &str, desc: &str, code: Option<Vec<u8>>) {
        let n = self.pool.utf8(name);
        let d = self.pool.utf8(desc);
        self.methods.push(MethodDef {
            access,
            name: n,
            desc: d,
            code,
        });
    }

    /// Adds `<init>()V` calling `java/lang/Object.<init>`.
    pub fn default_constructor(&mut self) {
        let init = self.method_ref("java/lang/Object", "<init>", "()V");
        let code = Asm::new().aload(0).invokespecial(init).ret().finish();
        self.method(ACC_PUBLIC, "<init>", "()V", Some(code));
    }

    pub fn build(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&0xCAFE_BABEu32.to_be_bytes());
        out.extend_from_slice(&0u16.to_be_bytes());
        out.extend_from_slice(&self.major.to_be_bytes());
        out.extend_from_slice(&self.pool.next.to_be_bytes());
        out.extend_from_slice(&self.pool.bytes);
        out.extend_from_slice(&self.access.to_be_bytes());
        out.extend_from_slice(&self.this_class.to_be_bytes());
        out.extend_from_slice(&self.super_class.to_be_bytes());
        out.extend_from_slice(&0u16.to_be_bytes());
        out.extend_from_slice(&(self.fields.len() as u16).to_be_bytes());
        for (access, name, desc) in &self.fields {
            for v in [access, name, desc, &0] {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
        out.extend_from_slice(&(self.methods.len() as u16).to_be_bytes());
        for m in &self.methods {
            for v in [m.access, m.name, m.desc] {
                out.extend_from_slice(&v.to_be_bytes());
            }
            match &m.code {
                None => out.extend_from_slice(&0u16.to_be_bytes()),
                Some(code) => {
                    out.extend_from_slice(&1u16.to_be_bytes());
                    out.extend_from_slice(&self.code_attr.to_be_bytes());
                    let len = 2 + 2 + 4 + code.len() + 2 + 2;
                    out.extend_from_slice(&(len as u32).to_be_bytes());
                    out.extend_from_slice(&8u16.to_be_bytes());
                    out.extend_from_slice(&8u16.to_be_bytes());
                    out.extend_from_slice(&(code.len() as u32).to_be_bytes());
                    out.extend_from_slice(code);
                    out.extend_from_slice(&0u16.to_be_bytes());
                    out.extend_from_slice(&0u16.to_be_bytes());
                }
            }
        }
        out.extend_from_slice(&0u16.to_be_bytes());
        out
    }
}

/// Minimal bytecode emitter covering the instructions fixtures need.
#[derive(Default)]
pub struct Asm {
    code: Vec<u8>,
}

impl Asm {
    pub fn new() -> Self {
        Self::default()
    }

    fn op_u16(mut self, op: u8, index: u16) -> Self {
        self.code.push(op);
        self.code.extend_from_slice(&index.to_be_bytes());
        self
    }

    pub fn raw(mut self, bytes: &[u8]) -> Self {
        self.code.extend_from_slice(bytes);
        self
    }

    pub fn aload(mut self, slot: u8) -> Self {
        assert!(slot < 4);
        self.code.push(0x2a + slot);
        self
    }

    pub fn astore(mut self, slot: u8) -> Self {
        assert!(slot < 4);
        self.code.push(0x4b + slot);
        self
    }

    pub fn dup(mut self) -> Self {
        self.code.push(0x59);
        self
    }

    pub fn pop(mut self) -> Self {
        self.code.push(0x57);
        self
    }

    pub fn iconst_1(mut self) -> Self {
        self.code.push(0x04);
        self
    }

    pub fn iadd(mut self) -> Self {
        self.code.push(0x60);
        self
    }

    pub fn ret(mut self) -> Self {
        self.code.push(0xb1);
        self
    }

    pub fn getstatic(self, i: u16) -> Self {
        self.op_u16(0xb2, i)
    }

    pub fn putstatic(self, i: u16) -> Self {
        self.op_u16(0xb3, i)
    }

    pub fn getfield(self, i: u16) -> Self {
        self.op_u16(0xb4, i)
    }

    pub fn putfield(self, i: u16) -> Self {
        self.op_u16(0xb5, i)
    }

    pub fn invokevirtual(self, i: u16) -> Self {
        self.op_u16(0xb6, i)
    }

    pub fn invokespecial(self, i: u16) -> Self {
        self.op_u16(0xb7, i)
    }

    pub fn invokestatic(self, i: u16) -> Self {
        self.op_u16(0xb8, i)
    }

    pub fn invokeinterface(mut self, i: u16, arg_slots: u8) -> Self {
        self = self.op_u16(0xb9, i);
        self.code.extend_from_slice(&[arg_slots, 0]);
        self
    }

    pub fn new_object(self, class: u16) -> Self {
        self.op_u16(0xbb, class)
    }

    pub fn anewarray(self, class: u16) -> Self {
        self.op_u16(0xbd, class)
    }

    pub fn checkcast(self, class: u16) -> Self {
        self.op_u16(0xc0, class)
    }

    pub fn instanceof(self, class: u16) -> Self {
        self.op_u16(0xc1, class)
    }

    pub fn ldc_w(self, index: u16) -> Self {
        self.op_u16(0x13, index)
    }

    pub fn finish(self) -> Vec<u8> {
        self.code
    }
}

/// Writes a deflated ZIP/JAR with the given entries in order. Names ending
/// in `/` become directory entries.
pub fn write_jar(path: &Path, entries: &[(String, Vec<u8>)]) -> std::io::Result<()> {
    std::fs::write(path, jar_bytes(entries))
}

pub fn jar_bytes(entries: &[(String, Vec<u8>)]) -> Vec<u8> {
    let mut zip = zip::ZipWriter::new(Cursor::new(Vec::new()));
    let options = SimpleFileOptions::default()
        .compression_method(zip::CompressionMethod::Deflated)
        .last_modified_time(zip::DateTime::default());
    for (name, data) in entries {
        if name.ends_with('/') {
            zip.add_directory(name.trim_end_matches('/'), options)
                .expect("zip directory");
        } else {
            zip.start_file(name.as_str(), options).expect("zip entry");
            zip.write_all(data).expect("zip write");
        }
    }
    zip.finish().expect("zip finish").into_inner()
}

/// Java source the sample fixture classes are assembled from.
pub const SAMPLE_SOURCE: &str = include_str!("../fixtures/SampleNetwork.java");

/// Class files of the sample network, in archive order.
pub fn sample_classes() -> Vec<(String, Vec<u8>)> {
    let mut network = ClassBuilder::new("sample/SampleNetwork");
    network.default_constructor();
    let class_a = network.class_ref("sample/ClassA");
    let a_init = network.method_ref("sample/ClassA", "<init>", "()V");
    let method1 = network.method_ref("sample/ClassA", "method1", "()V");
    let method2 = network.method_ref("sample/ClassB", "method2", "(Lsample/Greeter;)V");
    let helper = network.method_ref("sample/SampleNetwork", "helper", "()V");
    let out = network.field_ref("java/lang/System", "out", "Ljava/io/PrintStream;");
    let count = network.field_ref("sample/ClassA", "count", "I");
    let println = network.method_ref("java/io/PrintStream", "println", "(I)V");
    let body = Asm::new()
        .new_object(class_a)
        .dup()
        .invokespecial(a_init)
        .astore(2)
        .aload(2)
        .invokevirtual(method1)
        .aload(1)
        .invokestatic(method2)
        .aload(0)
        .invokespecial(helper)
        .getstatic(out)
        .aload(2)
        .getfield(count)
        .invokevirtual(println)
        .ret()
        .finish();
    network.method(ACC_PUBLIC, "doSomething", "(Lsample/Greeter;)V", Some(body));
    network.method(
        ACC_PRIVATE,
        "helper",
        "()V",
        Some(Asm::new().ret().finish()),
    );

    let mut a = ClassBuilder::new("sample/ClassA");
    a.field(ACC_PUBLIC, "count", "I");
    a.default_constructor();
    let method3 = a.method_ref("sample/ClassA", "method3", "()V");
    let own_count = a.field_ref("sample/ClassA", "count", "I");
    a.method(
        ACC_PUBLIC,
        "method1",
        "()V",
        Some(Asm::new().aload(0).invokespecial(method3).ret().finish()),
    );
    a.method(
        ACC_PRIVATE,
        "method3",
        "()V",
        Some(
            Asm::new()
                .aload(0)
                .dup()
                .getfield(own_count)
                .iconst_1()
                .iadd()
                .putfield(own_count)
                .ret()
                .finish(),
        ),
    );

    let mut b = ClassBuilder::new("sample/ClassB");
    b.default_constructor();
    let greet = b.interface_method_ref("sample/Greeter", "greet", "()V");
    b.method(
        ACC_PUBLIC | ACC_STATIC,
        "method2",
        "(Lsample/Greeter;)V",
        Some(Asm::new().aload(0).invokeinterface(greet, 1).ret().finish()),
    );

    let mut greeter = ClassBuilder::new("sample/Greeter").interface();
    greeter.method(ACC_PUBLIC | ACC_ABSTRACT, "greet", "()V", None);

    vec![
        ("sample/SampleNetwork.class".into(), network.build()),
        ("sample/ClassA.class".into(), a.build()),
        ("sample/ClassB.class".into(), b.build()),
        ("sample/Greeter.class".into(), greeter.build()),
    ]
}

/// The sample classes plus a manifest, a directory entry and a resource.
pub fn sample_jar_entries() -> Vec<(String, Vec<u8>)> {
    let mut entries = vec![
        ("META-INF/".to_string(), Vec::new()),
        (
            "META-INF/MANIFEST.MF".to_string(),
            b"Manifest-Version: 1.0\r\n\r\n".to_vec(),
        ),
        ("sample/".to_string(), Vec::new()),
    ];
    entries.extend(sample_classes());
    entries.push((
        "sample/messages.properties".to_string(),
        b"greeting=hello\n".to_vec(),
    ));
    entries
}

/// Hand-written expected relation table for [`sample_jar_entries`].
pub const SAMPLE_RELATIONS_CSV: &str = include_str!("../fixtures/sample.relations.csv");

/// Golden GEXF for the sample relation table built with prefix `sample`.
pub const SAMPLE_GEXF: &str = include_str!("../fixtures/sample.gexf");
