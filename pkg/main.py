import uvicorn
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from pathgauge import __version__
from pathgauge.analysis import app as analysis

# Create the application
tags_metadata = [
    {
        "name": "Analysis",
        "description": """pathgauge's analysis api computes path-norms of ReLU networks given as
        neuron DAGs: validation against the architecture invariants, mixed path-norms, the
        Lipschitz bound, q-normalization of the parameters, and the constants of the
        path-norm generalization bound.""",
    },
]

app = FastAPI(title="pathgauge", version=__version__, openapi_tags=tags_metadata)

origins = ["*"]
app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# routers

app.include_router(analysis, tags=["Analysis"])


@app.get("/", tags=["Home"])
async def get_root() -> dict:
    return {"message": "pathgauge is running", "version": __version__}


if __name__ == "__main__":
    uvicorn.run("main:app", port=7001, reload=True)
