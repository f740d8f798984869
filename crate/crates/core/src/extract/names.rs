use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Kind of a unit in a call relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UnitKind {
    /// Method (virtual or special dispatch).
    M,
    /// Object construction.
    O,
    /// Interface dispatch.
    I,
    /// Static call.
    S,
    /// Class-usage relationship.
    C,
}

impl UnitKind {
    pub const ALL: [UnitKind; 5] = [
        UnitKind::M,
        UnitKind::O,
        UnitKind::I,
        UnitKind::S,
        UnitKind::C,
    ];

    pub fn as_char(self) -> char {
        match self {
            UnitKind::M => 'M',
            UnitKind::O => 'O',
            UnitKind::I => 'I',
            UnitKind::S => 'S',
            UnitKind::C => 'C',
        }
    }

    /// True for the kinds whose callee names a method.
    pub fn names_method(self) -> bool {
        self != UnitKind::C
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for UnitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "M" => Ok(UnitKind::M),
            "O" => Ok(UnitKind::O),
            "I" => Ok(UnitKind::I),
            "S" => Ok(UnitKind::S),
            "C" => Ok(UnitKind::C),
            other => Err(format!("unknown unit kind {other:?}")),
        }
    }
}

/// How method names are rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NameStyle {
    /// `pkg.Class::method`; overloads merge.
    #[default]
    Plain,
    /// `pkg.Class::method(desc)`.
    WithDescriptor,
}

/// Dot-form class name with an optional method, rendered as `pkg.Class` or
/// `pkg.Class::method`.
///
/// Constructors (`<init>`) are stored under the method name `new`. Inner
/// classes keep their `$` binary names. Classes in the default package have
/// an empty `package_path`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QualifiedName {
    pub package_path: String,
    pub class_name: String,
    pub method_name: Option<String>,
    pub descriptor: Option<String>,
}

pub const CONSTRUCTOR_NAME: &str = "new";

impl QualifiedName {
    /// Builds a class name from internal (`a/b/C`) or dotted (`a.b.C`) form.
    pub fn class(name: &str) -> Self {
        let dotted = name.replace('/', ".");
        let (package_path, class_name) = match dotted.rfind('.') {
            Some(i) => (dotted[..i].to_owned(), dotted[i + 1..].to_owned()),
            None => (String::new(), dotted),
        };
        QualifiedName {
            package_path,
            class_name,
            method_name: None,
            descriptor: None,
        }
    }

    pub fn method(class: &str, name: &str, descriptor: &str) -> Self {
        let name = if name == "<init>" {
            CONSTRUCTOR_NAME
        } else {
            name
        };
        QualifiedName {
            method_name: Some(name.to_owned()),
            descriptor: Some(descriptor.to_owned()),
            ..QualifiedName::class(class)
        }
    }

    /// Fully qualified class part, `pkg.Class`.
    pub fn class_fqn(&self) -> String {
        if self.package_path.is_empty() {
            self.class_name.clone()
        } else {
            format!("{}.{}", self.package_path, self.class_name)
        }
    }

    /// The class this name belongs to, without method.
    pub fn class_part(&self) -> QualifiedName {
        QualifiedName {
            package_path: self.package_path.clone(),
            class_name: self.class_name.clone(),
            method_name: None,
            descriptor: None,
        }
    }

    pub fn is_constructor(&self) -> bool {
        self.method_name.as_deref() == Some(CONSTRUCTOR_NAME)
    }

    pub fn render(&self, style: NameStyle) -> String {
        let mut out = self.class_fqn();
        if let Some(m) = &self.method_name {
            out.push_str("::");
            out.push_str(m);
            if let (NameStyle::WithDescriptor, Some(d)) = (style, &self.descriptor) {
                out.push_str(d);
            }
        }
        out
    }

    /// Inverse of [`render`](Self::render) for either style.
    pub fn parse(rendered: &str) -> Result<Self, String> {
        let (class, method) = match rendered.split_once("::") {
            Some((c, m)) => (c, Some(m)),
            None => (rendered, None),
        };
        if class.is_empty() || class.ends_with('.') || class.starts_with('.') {
            return Err(format!("bad class name in {rendered:?}"));
        }
        let mut name = QualifiedName::class(class);
        if let Some(m) = method {
            let (m, desc) = match m.find('(') {
                Some(i) => (&m[..i], Some(m[i..].to_owned())),
                None => (m, None),
            };
            if m.is_empty() {
                return Err(format!("empty method name in {rendered:?}"));
            }
            name.method_name = Some(m.to_owned());
            name.descriptor = desc;
        }
        Ok(name)
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(NameStyle::Plain))
    }
}

/// One row of the relation table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CallRecord {
    pub caller_kind: UnitKind,
    pub caller: QualifiedName,
    pub callee_kind: UnitKind,
    pub callee: QualifiedName,
}

impl CallRecord {
    /// Checks the kind/method-presence invariants.
    pub fn validate(&self) -> Result<(), String> {
        let caller_has_method = self.caller.method_name.is_some();
        if (self.caller_kind == UnitKind::C) == caller_has_method {
            return Err(format!(
                "caller {} of kind {} {} a method",
                self.caller,
                self.caller_kind,
                if caller_has_method {
                    "must not name"
                } else {
                    "must name"
                }
            ));
        }
        if self.callee_kind.names_method() != self.callee.method_name.is_some() {
            return Err(format!(
                "callee {} of kind {} {} a method",
                self.callee,
                self.callee_kind,
                if self.callee_kind.names_method() {
                    "must name"
                } else {
                    "must not name"
                }
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationTable {
    pub records: Vec<CallRecord>,
    pub source_archive: String,
    pub class_count: usize,
}
