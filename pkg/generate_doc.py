import wvnn.wvnnhelp as wvnnhelp
from wvnn.wvnnpresets import RunConfig, list_presets


def preset_table():
    """Markdown table of the shipped presets and the first comment line of each."""
    lines = ["| Preset | Sweep | Description |", "| --- | --- | --- |"]
    for name in list_presets():
        config = RunConfig.from_preset(name)
        with open(config.source, "r", encoding="utf-8") as f:
            first = f.readline().strip()
        description = first.lstrip("# ").replace("|", "\\|") if first.startswith("#") else ""
        lines.append(f"| `{name}` | {config.kind} | {description} |")
    return "\n".join(lines)


if __name__ == "__main__":

    out_markdown = "## Manual\n\n"

    out_markdown += "### weak-value\n\n"
    out_markdown += "```\nwvnn weak-value --obs pauli:x --theta-i pi/12 --theta-f 5*pi/12 --eigen\n```\n\n"
    out_markdown += wvnnhelp.WEAK_VALUE + "\n"

    out_markdown += "### sweep\n\n"
    out_markdown += "```\nwvnn sweep --preset fig2 --theta-i '0, pi/2, 100' --format json\n```\n\n"
    out_markdown += wvnnhelp.SWEEP + "\n"

    out_markdown += "#### Sweep kinds\n\n"
    for text in (
        wvnnhelp.STATE_GRID,
        wvnnhelp.OBSERVABLE_SWEEP,
        wvnnhelp.EIGEN_SWEEP,
        wvnnhelp.FAMILY_SWEEP,
        wvnnhelp.PHASE_CURVE,
    ):
        out_markdown += text + "\n"

    out_markdown += "#### Presets\n\n"
    out_markdown += preset_table() + "\n\n"

    out_markdown += "### meter\n\n"
    out_markdown += "```\nwvnn meter --obs pauli:y --theta-i 0.3 --theta-f 0.5 --gamma '1e-2, 5e-3, 2.5e-3'\n```\n\n"
    out_markdown += wvnnhelp.METER + "\n"

    out_markdown += "### verify\n\n"
    out_markdown += "```\nwvnn verify --seed 7 --report json\n```\n\n"
    out_markdown += wvnnhelp.VERIFY + "\n"

    out_markdown += "### Configuration\n\n"
    out_markdown += wvnnhelp.CONFIG_FILES + "\n\n"
    out_markdown += wvnnhelp.EXIT_CODES + "\n"

    print(out_markdown)

    # Read the entire file first
    with open("README.md", "r", encoding="utf-8") as f:
        content = f.read()

    # Find the position to insert/replace content
    pos = content.find("## Manual")
    if pos != -1:
        # Replace everything from "## Manual" onwards
        new_content = content[:pos] + out_markdown
    else:
        # If "## Manual" not found, append to the end
        new_content = content + "\n" + out_markdown

    # Write the new content
    with open("README.md", "w", encoding="utf-8") as f:
        f.write(new_content)
