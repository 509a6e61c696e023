"""Minimal SVG document builder for the report charts."""
from typing import Dict, Optional
from xml.sax.saxutils import escape


class SVG:
    """Accumulates SVG elements; :meth:`get_svg` closes the document."""

    def __init__(self):
        self.svg = ""

    def header(self, width: float, height: float) -> None:
        self.svg += (
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
            f'<svg version="1.1" width="{width:.0f}" height="{height:.0f}" '
            f'viewBox="0 0 {width:.0f} {height:.0f}" xmlns="http://www.w3.org/2000/svg">\n'
        )

    def style(self, css: str) -> None:
        self.svg += f"<style>{css}</style>\n"

    def group_start(self, attr: Dict[str, str]) -> None:
        g_attr = [f'{key}="{escape(str(value))}"' for key, value in attr.items()
                  if key in ('id', 'class', 'transform')]
        self.svg += f'<g {" ".join(g_attr)}>\n'
        if 'title' in attr:
            self.svg += f'<title>{escape(attr["title"])}</title>\n'

    def group_end(self) -> None:
        self.svg += '</g>\n'

    def filled_rectangle(
        self, x1: float, y1: float, x2: float, y2: float, fill: str,
        css_class: Optional[str] = None, title: Optional[str] = None,
    ) -> None:
        class_attr = f' class="{css_class}"' if css_class else ''
        rect = (f'<rect{class_attr} x="{x1:.1f}" y="{y1:.1f}" '
                f'width="{x2 - x1:.1f}" height="{y2 - y1:.1f}" fill="{fill}"')
        if title:
            self.svg += f'{rect}><title>{escape(title)}</title></rect>\n'
        else:
            self.svg += f'{rect}/>\n'

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str = "#333") -> None:
        self.svg += (f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                     f'stroke="{stroke}"/>\n')

    def text(self, x: float, y: float, string: str, extra: str = "") -> None:
        extra = f' {extra}' if extra else ''
        self.svg += f'<text x="{x:.1f}" y="{y:.1f}"{extra}>{escape(string)}</text>\n'

    def get_svg(self) -> str:
        return f"{self.svg}</svg>\n"
