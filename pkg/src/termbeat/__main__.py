from termbeat.cli import main

raise SystemExit(main())
