//! Minimal XML tree reader used by the FML parser.

use super::FmlError;
use quick_xml::events::Event;
use quick_xml::Reader;

#[derive(Debug, Clone, PartialEq)]
pub struct XmlElement {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<XmlElement>,
    pub text: String,
}

impl XmlElement {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

/// Parse a document into its root element. Comments and the XML
/// declaration are skipped; anything else malformed is an error.
pub fn parse_document(text: &str) -> Result<XmlElement, FmlError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let xml_err = |reader: &Reader<&[u8]>, reason: String| FmlError::Xml {
        offset: reader.buffer_position() as usize,
        reason,
    };

    let mut stack: Vec<XmlElement> = Vec::new();
    let mut root: Option<XmlElement> = None;

    loop {
        let event = reader
            .read_event()
            .map_err(|e| xml_err(&reader, e.to_string()))?;
        match event {
            Event::Decl(_) | Event::Comment(_) | Event::PI(_) | Event::DocType(_) => {}
            Event::Start(ref start) => {
                let element = open_element(start, &reader)?;
                stack.push(element);
            }
            Event::Empty(ref start) => {
                let element = open_element(start, &reader)?;
                attach(&mut stack, &mut root, element, &reader)?;
            }
            Event::End(_) => {
                let element = stack
                    .pop()
                    .ok_or_else(|| xml_err(&reader, "unmatched end tag".to_string()))?;
                attach(&mut stack, &mut root, element, &reader)?;
            }
            Event::Text(text) => {
                let value = text
                    .unescape()
                    .map_err(|e| xml_err(&reader, e.to_string()))?;
                match stack.last_mut() {
                    Some(parent) => parent.text.push_str(&value),
                    None => {
                        return Err(xml_err(
                            &reader,
                            "text outside the root element".to_string(),
                        ))
                    }
                }
            }
            Event::CData(data) => {
                let value = String::from_utf8_lossy(&data).into_owned();
                match stack.last_mut() {
                    Some(parent) => parent.text.push_str(&value),
                    None => {
                        return Err(xml_err(
                            &reader,
                            "cdata outside the root element".to_string(),
                        ))
                    }
                }
            }
            Event::Eof => break,
        }
    }

    if !stack.is_empty() {
        return Err(FmlError::Xml {
            offset: text.len(),
            reason: "unclosed element at end of input".to_string(),
        });
    }
    root.ok_or_else(|| FmlError::Xml {
        offset: 0,
        reason: "document has no root element".to_string(),
    })
}

fn open_element(
    start: &quick_xml::events::BytesStart<'_>,
    reader: &Reader<&[u8]>,
) -> Result<XmlElement, FmlError> {
    let xml_err = |reason: String| FmlError::Xml {
        offset: reader.buffer_position() as usize,
        reason,
    };
    let name = String::from_utf8_lossy(start.name().as_ref()).into_owned();
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| xml_err(e.to_string()))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr
            .unescape_value()
            .map_err(|e| xml_err(e.to_string()))?
            .into_owned();
        attrs.push((key, value));
    }
    Ok(XmlElement {
        name,
        attrs,
        children: Vec::new(),
        text: String::new(),
    })
}

fn attach(
    stack: &mut Vec<XmlElement>,
    root: &mut Option<XmlElement>,
    element: XmlElement,
    reader: &Reader<&[u8]>,
) -> Result<(), FmlError> {
    if let Some(parent) = stack.last_mut() {
        parent.children.push(element);
        Ok(())
    } else if root.is_none() {
        *root = Some(element);
        Ok(())
    } else {
        Err(FmlError::Xml {
            offset: reader.buffer_position() as usize,
            reason: "multiple root elements".to_string(),
        })
    }
}
