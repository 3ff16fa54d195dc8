from hadvp.cli import main

raise SystemExit(main())
