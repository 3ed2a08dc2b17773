from app.cli import app

app(prog_name="bertrand-lab")
