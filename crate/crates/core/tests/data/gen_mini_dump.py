"""Generates the miniature swt Posts dump, its link manifest and pipeline config.

Run from this directory: python3 gen_mini_dump.py
"""
import json
import random
from xml.sax.saxutils import quoteattr

rng = random.Random(7)

THEMES = {
    "table": ["table", "column", "row", "cell", "viewer", "sort", "header", "selection"],
    "layout": ["layout", "grid", "composite", "shell", "resize", "margin", "spacing", "form"],
    "dialog": ["dialog", "file", "button", "message", "modal", "window", "open", "prompt"],
    "graphics": ["image", "color", "draw", "canvas", "paint", "font", "gc", "pixel"],
    "tree": ["tree", "node", "expand", "item", "children", "checkbox", "parent", "collapse"],
}
FILLER = ["want", "need", "program", "application", "widget", "java", "eclipse", "code", "way", "using"]
CODE = {
    "table": "TableViewer viewer = new TableViewer(parent);\nviewer.setSorter(new ViewerSorter());",
    "layout": "GridLayout layout = new GridLayout(2, false);\ncomposite.setLayout(layout);",
    "dialog": "FileDialog dlg = new FileDialog(shell, SWT.OPEN);\nString path = dlg.open();",
    "graphics": "GC gc = new GC(image);\ngc.setForeground(color);\ngc.drawLine(0, 0, 10, 10);",
    "tree": "TreeItem item = new TreeItem(tree, SWT.NONE);\nitem.setExpanded(true);",
}
ALIVE = ["http://www.eclipse.org/swt/snippets/", "http://help.eclipse.org/swt/layouts.html",
         "https://wiki.eclipse.org/SWT_FAQ", "http://www.vogella.com/tutorials/SWT/article.html"]
DEAD = ["http://old.example.test/swt-tips", "http://geocities.example.test/~swt/"]
UNREACHABLE = ["http://down.example.test/forum"]

rows = []
next_id = [1000]


def new_id():
    next_id[0] += rng.randint(1, 9)
    return next_id[0]


def date(i):
    return f"2011-{1 + i % 12:02d}-{1 + i % 28:02d}T{i % 24:02d}:{i % 60:02d}:{(7 * i) % 60:02d}.{i % 1000:03d}"


def words(theme, n):
    vocab = THEMES[theme]
    return " ".join(rng.choice(vocab) if rng.random() < 0.7 else rng.choice(FILLER) for _ in range(n))


def question(i, theme, kind, tags):
    qid = new_id()
    w = THEMES[theme]
    if kind == "howto":
        title = f"How to {w[0]} {rng.choice(w)} in SWT"
        body = f"<p>I {words(theme, 12)}.</p>\n<p>Is there a {words(theme, 6)}?</p>"
    elif kind == "debug":
        title = f"How to {w[1]} {rng.choice(w)} without {rng.choice(w)}"
        body = f"<p>I get an error when I {words(theme, 10)}.</p>"
    elif kind == "codeerror":
        title = f"How to {w[2]} {rng.choice(w)}"
        body = f"<p>{words(theme, 10)}</p>\n<pre><code>catch (SWTError e) {{ log(e); }}\n</code></pre>"
    else:
        title = f"{w[3].capitalize()} {rng.choice(w)} behaves strangely"
        body = f"<p>Why does {words(theme, 10)}?</p>"
    if i % 9 == 0:
        title += " &amp; keep <state>"
        body += "\n<p>Use &lt;b&gt; tags &amp; entities.</p>"
    if i % 13 == 0:
        body += "\n<p>" + words(theme, 260) + "</p>"
    else:
        body += "\n<p>" + words(theme, rng.choice([0, 5, 20, 40, 70, 100, 140])) + "</p>"
    if i % 11 == 0:
        body += f'\n<p>See <a href="{rng.choice(DEAD)}">this page</a>.</p>'
    if i % 7 == 0:
        body += f'\n<p>I read <a href="{rng.choice(ALIVE)}">the docs</a>.</p>'
    return {
        "Id": qid, "PostTypeId": 1, "Title": title.replace("&amp;", "&"), "Body": body,
        "Tags": "".join(f"<{t}>" for t in tags), "Score": rng.randint(-2, 40),
        "CreationDate": date(i),
    }


def answer(i, q, theme, with_code, link=None):
    aid = new_id()
    body = f"<p>You can {words(theme, 9)}.</p>"
    if with_code:
        body += f"\n<pre><code>{CODE[theme].replace('<', '&lt;')}\n</code></pre>"
    else:
        body += " <p>Call <code>layout()</code> again.</p>"
    if link:
        body += f'\n<p>More at {link}.</p>' if i % 2 else f'\n<p><a href="{link}">Reference</a></p>'
    return {"Id": aid, "PostTypeId": 2, "ParentId": q["Id"], "Body": body,
            "Score": rng.randint(-1, 60), "CreationDate": date(i + 500)}


themes = list(THEMES)
kinds = ["howto"] * 7 + ["debug", "codeerror", "other"]
for i in range(92):
    theme = themes[i % len(themes)]
    kind = kinds[rng.randrange(len(kinds))]
    q = question(i, theme, kind, ["java", "swt"] if i % 3 else ["swt"])
    rows.append(q)
    answers = []
    for j in range(rng.randint(1, 3)):
        link = None
        r = rng.random()
        if r < 0.15:
            link = rng.choice(ALIVE)
        elif r < 0.20:
            link = rng.choice(DEAD + UNREACHABLE)
        answers.append(answer(i * 3 + j, q, theme, rng.random() < 0.8, link))
    accepted = rng.choice(answers + [None])
    if accepted:
        q["AcceptedAnswerId"] = accepted["Id"]
    rows.extend(answers)

for i in range(20):
    q = question(200 + i, rng.choice(themes), "howto", ["qt"] if i % 2 else ["java", "jface"])
    rows.append(q)
    rows.append(answer(900 + i, q, rng.choice(themes), True))

# A tag wiki excerpt and a wiki body, which the parser skips.
rows.append({"Id": new_id(), "PostTypeId": 4, "Body": "<p>SWT is a widget toolkit.</p>", "Score": 0,
             "CreationDate": date(1)})
rows.append({"Id": new_id(), "PostTypeId": 5, "Body": "<p>Standard Widget Toolkit.</p>", "Score": 0,
             "CreationDate": date(2)})

order = ["Id", "PostTypeId", "ParentId", "AcceptedAnswerId", "CreationDate", "Score", "Body", "Title", "Tags"]
with open("mini_posts.xml", "w", encoding="utf-8") as f:
    f.write('<?xml version="1.0" encoding="utf-8"?>\n<posts>\n')
    for row in rows:
        attrs = " ".join(f"{k}={quoteattr(str(row[k]), {chr(10): '&#xA;'})}" for k in order if k in row)
        f.write(f"  <row {attrs} />\n")
    f.write("</posts>\n")

manifest = {u: 200 for u in ALIVE}
manifest.update({u: 404 for u in DEAD})
manifest.update({u: None for u in UNREACHABLE})
with open("mini_links.json", "w", encoding="utf-8") as f:
    json.dump(manifest, f, indent=2, sort_keys=True)
    f.write("\n")

print(f"{len(rows)} rows")
