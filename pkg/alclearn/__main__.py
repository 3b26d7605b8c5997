from alclearn.main import main

raise SystemExit(main())
