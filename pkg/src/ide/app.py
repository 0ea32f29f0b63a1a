# app.py
from __future__ import annotations
import sys
from pathlib import Path

# Rutas correctas
SRC_DIR   = Path(__file__).resolve().parents[1]   # .../src
REPO_ROOT = SRC_DIR.parent

# Hacer importable el paquete bajo src/
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))
import streamlit as st

from ide.run_data import find_runs, load_run, manifest_json

st.set_page_config(page_title="Visor de corridas", layout="wide")

# ---------- Estilos ----------
def inject_custom_css():
    st.markdown("""
    <style>
        :root { --panel: #252526; --accent: #007acc; --text: #d4d4d4; }
        [data-testid="stSidebar"] { background-color: var(--panel) !important; }
        [data-baseweb="tab"][aria-selected="true"] { background-color: var(--accent) !important; color: white !important; }
        h1, h2, h3 { color: var(--text) !important; }
    </style>
    """, unsafe_allow_html=True)

@st.cache_data(show_spinner=False)
def list_runs(base: str) -> list[str]:
    return [str(p) for p in find_runs(base)]

inject_custom_css()
st.markdown("""
    <div style="padding: 10px 20px; border-bottom: 1px solid #007acc;">
        <h1 style="margin: 0; color: #007acc; font-size: 24px;">🧍 Visor de corridas</h1>
    </div>
""", unsafe_allow_html=True)

# === Sidebar: elegir directorio ===
with st.sidebar:
    st.header("📁 Corridas")
    base = st.text_input("Directorio base", value=str(REPO_ROOT / "out"))
    runs = list_runs(base)
    if st.button("🔄 Refrescar", use_container_width=True):
        list_runs.clear()
        runs = list_runs(base)
    run_dir = st.selectbox("Corrida", ["(ninguna)"] + runs)

if run_dir == "(ninguna)":
    st.info("Elige una corrida con manifest.json en la barra lateral.")
    st.stop()

run = load_run(run_dir)
if run is None:
    st.error(f"No hay manifest.json en {run_dir}")
    st.stop()

col1, col2, col3 = st.columns(3)
col1.metric("Comando", run.command)
col2.metric("Archivos", len(run.manifest.get("outputs", [])))
col3.metric("Advertencias", len(run.warnings))
if run.missing:
    st.warning(f"Archivos listados que no existen: {', '.join(run.missing)}")

tab1, tab2, tab3, tab4 = st.tabs(["🖼️ Imágenes", "⏱️ Etapas", "⚠️ Advertencias", "📄 Manifest"])

with tab1:
    textures, views = run.textures(), run.views()
    if textures:
        st.subheader("Texturas")
        cols = st.columns(min(3, len(textures)))
        for i, p in enumerate(textures):
            cols[i % len(cols)].image(str(p), caption=p.name, use_container_width=True)
    if views:
        st.subheader("Vistas")
        cols = st.columns(min(4, len(views)))
        for i, p in enumerate(views):
            cols[i % len(cols)].image(str(p), caption=p.name, use_container_width=True)
    if not textures and not views:
        st.info("Esta corrida no produjo imágenes.")
    if run.report:
        st.subheader("Métricas")
        st.dataframe(run.report, use_container_width=True, hide_index=True)

with tab2:
    table = run.timings_table()
    if table:
        st.dataframe(table, use_container_width=True, hide_index=True,
                     column_config={"ms": st.column_config.NumberColumn("ms", format="%.1f")})
        st.info(f"Total: {sum(r['ms'] for r in table):.1f} ms")
    st.json(run.manifest.get("stats", {}))

with tab3:
    if run.warnings:
        st.dataframe(run.warnings_table(), use_container_width=True, hide_index=True)
    else:
        st.success("Sin advertencias ✅")

with tab4:
    text = manifest_json(run)
    st.code(text, language="json")
    st.download_button("📥 Descargar manifest.json", text.encode("utf-8"),
                       file_name="manifest.json", use_container_width=True)
