"""python -m thickening"""

from .cli import main

raise SystemExit(main())
